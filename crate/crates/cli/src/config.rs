//! `key=value` configuration files.
//!
//! Keys are long flag names without the leading dashes. A key is turned
//! into `--key value` and spliced into the argument list after the
//! subcommand, unless that flag was already given, so flags always win.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;

use crate::args::Cli;
use crate::error::CliError;

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) =
            line.split_once('=').ok_or_else(|| CliError::config(format!("line {}: expected key=value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::config(format!("line {}: empty key", i + 1)));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::config(format!("line {}: duplicate key `{k}`", i + 1)));
        }
    }
    Ok(map)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn given(args: &[OsString], long: &str) -> bool {
    let flag = format!("--{long}");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&format!("{flag}="))
    })
}

/// Returns `args` with the config file's entries merged in.
pub fn merge(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else { return Ok(args) };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let entries = parse(&text)?;

    let root = Cli::command();
    let sub_pos = args
        .iter()
        .position(|a| root.get_subcommands().any(|c| c.get_name() == a.to_string_lossy()))
        .ok_or_else(|| CliError::Usage("a subcommand is required".into()))?;
    let sub_name = args[sub_pos].to_string_lossy().into_owned();
    let sub = root.find_subcommand(&sub_name).expect("subcommand exists");

    let mut extra = Vec::new();
    for (key, value) in &entries {
        if key == "config" {
            return Err(CliError::config("a config file cannot name another config file".into()));
        }
        let arg = sub
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| CliError::config(format!("unknown key `{key}` for `{sub_name}`")))?;
        if given(&args, key) {
            continue;
        }
        if arg.get_action().takes_values() {
            extra.push(OsString::from(format!("--{key}={value}")));
        } else {
            match value.as_str() {
                "true" => extra.push(OsString::from(format!("--{key}"))),
                "false" => {}
                _ => return Err(CliError::config(format!("`{key}` takes true or false"))),
            }
        }
    }
    let mut merged = args;
    let tail = merged.split_off(sub_pos + 1);
    merged.extend(extra);
    merged.extend(tail);
    Ok(merged)
}
