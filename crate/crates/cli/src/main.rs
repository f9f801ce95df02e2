mod args;
mod commands;
mod config;
mod error;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Ctx;
use error::CliError;

fn run() -> Result<(), CliError> {
    let argv = config::merge(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return Ok(());
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            return Err(CliError::Usage(first));
        }
    };
    let ctx = Ctx { out: &cli.out, seed: cli.seed, workers: cli.workers };
    mfgf::sim::with_workers(cli.workers, || match &cli.command {
        Command::Predict(a) => commands::predict(&ctx, a),
        Command::RiskCurve(a) => commands::risk_curve_cmd(&ctx, a),
        Command::Simulate(a) => commands::simulate(&ctx, a),
        Command::VerifyBounds(a) => commands::verify_bounds(&ctx, a),
        Command::Coverage(a) => commands::coverage(&ctx, a),
    })?
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
