//! Text formats for results.
//!
//! Reals are written with 17 significant digits in the style of C's
//! `%.17g`, which round-trips every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::conformal::{FocalSystem, PredictionSet};
use crate::data_model::{LossKind, ModelKind};
use crate::risk::RiskCurve;
use crate::sim::{ReplicationSummary, SimConfig, RNG_ALGORITHM};
use crate::{MfgfError, Result};

/// `%.17g` formatting: shortest of fixed/scientific per C rules, trailing
/// zeros removed.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        trim_zeros(&fixed).to_string()
    } else {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn parse_real(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| MfgfError::Parse(format!("not a number: {s:?}")))
}

/// One `v lo hi` line per focal component.
pub fn focal_to_text(focal: &FocalSystem) -> String {
    let mut out = String::new();
    for (i, set) in focal.sets().iter().enumerate() {
        for c in &set.components {
            let _ = writeln!(out, "{} {} {}", i + 1, fmt_real(c.lo), fmt_real(c.hi));
        }
    }
    out
}

/// Parses `v lo hi` lines, skipping blank lines and `#` comments.
pub fn parse_interval_lines(text: &str) -> Result<Vec<(usize, f64, f64)>> {
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(MfgfError::Parse(format!("expected `v lo hi`, got {line:?}")));
        }
        let v = fields[0].parse().map_err(|_| MfgfError::Parse(format!("bad index in {line:?}")))?;
        out.push((v, parse_real(fields[1])?, parse_real(fields[2])?));
    }
    Ok(out)
}

/// Header comments with `k`, `n`, coverage and the merged region, followed
/// by the `v lo hi` lines of focal sets `1..=k`.
pub fn prediction_to_text(set: &PredictionSet, focal: &FocalSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# n {}", set.n);
    let _ = writeln!(out, "# k {}", set.k);
    let _ = writeln!(out, "# nominal_coverage {}", fmt_real(set.nominal_coverage));
    for (lo, hi) in &set.region {
        let _ = writeln!(out, "# region {} {}", fmt_real(*lo), fmt_real(*hi));
    }
    for (i, s) in focal.sets()[..set.k].iter().enumerate() {
        for c in &s.components {
            let _ = writeln!(out, "{} {} {}", i + 1, fmt_real(c.lo), fmt_real(c.hi));
        }
    }
    out
}

/// CSV with header `theta,value,kind`.
pub fn curve_to_csv(curve: &RiskCurve) -> String {
    let mut out = String::from("theta,value,kind\n");
    for (t, v) in curve.iter() {
        let _ = writeln!(out, "{},{},{}", fmt_real(t), fmt_real(v), curve.kind.as_str());
    }
    out
}

fn theta_value_csv(curve: &RiskCurve) -> String {
    let mut out = String::from("theta,value\n");
    for (t, v) in curve.iter() {
        let _ = writeln!(out, "{},{}", fmt_real(t), fmt_real(v));
    }
    out
}

#[derive(Serialize)]
struct Meta<'a> {
    generator: &'a str,
    rng: &'a str,
    master_seed: u64,
    model: String,
    loss: String,
    n_values: &'a [usize],
    replications: usize,
    theta_lo: String,
    theta_hi: String,
    theta_count: usize,
    percentiles: Vec<String>,
    histogram_bins: usize,
}

fn describe_model(kind: &ModelKind) -> String {
    match kind {
        ModelKind::TruncatedStdNormal { lo, hi } => {
            format!("truncated-std-normal[{},{}]", fmt_real(*lo), fmt_real(*hi))
        }
        ModelKind::Tabulated { knots, .. } => format!("tabulated({} knots)", knots.len()),
        ModelKind::PointMass { at } => format!("point-mass({})", fmt_real(*at)),
    }
}

fn describe_loss(kind: &LossKind) -> &'static str {
    match kind {
        LossKind::SquaredError => "squared",
        LossKind::AbsoluteError => "absolute",
        LossKind::Tabulated(_) => "tabulated",
    }
}

pub fn meta_json(config: &SimConfig) -> String {
    let meta = Meta {
        generator: concat!("mfgf ", env!("CARGO_PKG_VERSION")),
        rng: RNG_ALGORITHM,
        master_seed: config.master_seed,
        model: describe_model(config.model.kind()),
        loss: describe_loss(config.loss.kind()).into(),
        n_values: &config.n_values,
        replications: config.replications,
        theta_lo: fmt_real(config.theta_grid.lo()),
        theta_hi: fmt_real(config.theta_grid.hi()),
        theta_count: config.theta_grid.count(),
        percentiles: config.percentiles.iter().map(|&p| fmt_real(p)).collect(),
        histogram_bins: config.histogram_bins,
    };
    let mut s = serde_json::to_string_pretty(&meta).expect("meta serialises");
    s.push('\n');
    s
}

/// Writes `median_n{N}.csv`, `band_lo_n{N}.csv`, `band_hi_n{N}.csv`,
/// `minimizers_n{N}.csv`, `histogram_n{N}.csv` for each `N`, plus
/// `meta.json`.
pub fn write_summary_dir(summary: &ReplicationSummary, config: &SimConfig, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    for ns in &summary.per_n {
        let n = ns.n;
        fs::write(dir.join(format!("median_n{n}.csv")), theta_value_csv(&ns.median))?;
        fs::write(dir.join(format!("band_lo_n{n}.csv")), theta_value_csv(&ns.band_lo))?;
        fs::write(dir.join(format!("band_hi_n{n}.csv")), theta_value_csv(&ns.band_hi))?;
        let mins: String = ns.minimizers.iter().map(|&m| fmt_real(m) + "\n").collect();
        fs::write(dir.join(format!("minimizers_n{n}.csv")), mins)?;
        let mut h = String::from("bin_lo,bin_hi,count\n");
        for (i, c) in ns.histogram.counts.iter().enumerate() {
            let _ = writeln!(h, "{},{},{}", fmt_real(ns.histogram.edges[i]), fmt_real(ns.histogram.edges[i + 1]), c);
        }
        fs::write(dir.join(format!("histogram_n{n}.csv")), h)?;
    }
    fs::write(dir.join("meta.json"), meta_json(config))
}
