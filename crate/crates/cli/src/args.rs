use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "mfgf", version, about = "Model-free generalized fiducial prediction and upper-risk tools")]
pub struct Cli {
    /// key=value file supplying defaults for any long flag
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, env = "MFGF_OUT_DIR", default_value = "mfgf-out")]
    pub out: PathBuf,

    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Worker threads (0 = one per core); never changes the output
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Focal sets, prediction set and contour for a sample
    Predict(PredictArgs),
    /// Empirical, upper and (optionally) true risk over a theta grid
    RiskCurve(RiskCurveArgs),
    /// Replication study of upper-risk curves and minimisers
    Simulate(SimulateArgs),
    /// Monte Carlo check of the concentration bounds
    VerifyBounds(VerifyArgs),
    /// Monte Carlo coverage of prediction sets
    Coverage(CoverageArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// File with one number per line (`#` starts a comment)
    #[arg(long, value_name = "FILE", conflicts_with = "values")]
    pub data: Option<PathBuf>,

    /// Inline comma-separated observations
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SupportArgs {
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub hi: f64,
}

#[derive(Debug, Args)]
pub struct LossArgs {
    /// squared, absolute or constant:C
    #[arg(long, default_value = "squared")]
    pub loss: String,
    /// Parameter domain (defaults to the support)
    #[arg(long, allow_hyphen_values = true)]
    pub domain_lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub domain_hi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    /// Grid bounds (default to the parameter domain)
    #[arg(long, allow_hyphen_values = true)]
    pub theta_lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_hi: Option<f64>,
    #[arg(long)]
    pub theta_count: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub support: SupportArgs,
    /// identity or loo-mean
    #[arg(long, default_value = "identity")]
    pub score: String,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct RiskCurveArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub support: SupportArgs,
    #[command(flatten)]
    pub loss: LossArgs,
    #[command(flatten)]
    pub theta: ThetaArgs,
    /// Adds a true-risk column; `truncnorm` is the standard normal truncated to the support
    #[arg(long)]
    pub model: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub support: SupportArgs,
    #[command(flatten)]
    pub loss: LossArgs,
    #[command(flatten)]
    pub theta: ThetaArgs,
    #[arg(long, default_value = "truncnorm")]
    pub model: String,
    #[arg(long, value_delimiter = ',', default_value = "20,200")]
    pub n_values: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub replications: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.95")]
    pub percentiles: Vec<f64>,
    #[arg(long, default_value_t = 30)]
    pub bins: usize,
    /// Also write risk_curves.svg and minimizer_histograms.svg
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub support: SupportArgs,
    #[command(flatten)]
    pub loss: LossArgs,
    #[command(flatten)]
    pub theta: ThetaArgs,
    #[arg(long, default_value = "truncnorm")]
    pub model: String,
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1", allow_hyphen_values = true)]
    pub thetas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1")]
    pub epsilons: Vec<f64>,
    /// Sample sizes; each epsilon uses its threshold size when omitted
    #[arg(long, value_delimiter = ',')]
    pub n_values: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1000)]
    pub replications: usize,
    /// Also check the uniform guarantee over the theta grid at this level
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[command(flatten)]
    pub support: SupportArgs,
    #[arg(long, default_value = "truncnorm")]
    pub model: String,
    #[arg(long, value_delimiter = ',', default_value = "20")]
    pub n_values: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.2")]
    pub alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "identity,loo-mean")]
    pub scores: Vec<String>,
    #[arg(long, default_value_t = 10_000)]
    pub replications: usize,
}
