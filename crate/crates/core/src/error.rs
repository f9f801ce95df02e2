use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant has a stable short name (see [`MfgfError::name`]) that the
/// command-line front end prints as its diagnostic prefix.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MfgfError {
    #[error("value {value} lies outside the support [{lo}, {hi}]")]
    OutOfSupport { value: f64, lo: f64, hi: f64 },
    #[error("sample has no observations")]
    EmptySample,
    #[error("support [{lo}, {hi}] is degenerate (need lo < hi)")]
    DegenerateSupport { lo: f64, hi: f64 },
    #[error("a y-grid is required for non-identity nonconformity scores")]
    MissingGrid,
    #[error("focal set {v} is empty on the evaluation grid")]
    EmptyFocalSet { v: usize },
    #[error("alpha = {0} must lie strictly between 0 and 1")]
    InvalidAlpha(f64),
    #[error("index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("theta = {theta} outside the parameter domain [{lo}, {hi}]")]
    ThetaOutOfDomain { theta: f64, lo: f64, hi: f64 },
    #[error("loss is not attested convex in y")]
    NonConvexLoss,
    #[error("adaptive quadrature did not reach tolerance on [{lo}, {hi}]")]
    QuadratureNonconvergence { lo: f64, hi: f64 },
    #[error("epsilon = {0} must be positive")]
    NonpositiveEpsilon(f64),
    #[error("risk curves are evaluated on different theta grids")]
    GridMismatch,
    #[error("input is empty")]
    EmptyInput,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl MfgfError {
    /// Short variant name, e.g. `"EmptySample"`.
    pub fn name(&self) -> &'static str {
        match self {
            Self::OutOfSupport { .. } => "OutOfSupport",
            Self::EmptySample => "EmptySample",
            Self::DegenerateSupport { .. } => "DegenerateSupport",
            Self::MissingGrid => "MissingGrid",
            Self::EmptyFocalSet { .. } => "EmptyFocalSet",
            Self::InvalidAlpha(_) => "InvalidAlpha",
            Self::IndexOutOfRange { .. } => "IndexOutOfRange",
            Self::ThetaOutOfDomain { .. } => "ThetaOutOfDomain",
            Self::NonConvexLoss => "NonConvexLoss",
            Self::QuadratureNonconvergence { .. } => "QuadratureNonconvergence",
            Self::NonpositiveEpsilon(_) => "NonpositiveEpsilon",
            Self::GridMismatch => "GridMismatch",
            Self::EmptyInput => "EmptyInput",
            Self::InvalidGrid(_) => "InvalidGrid",
            Self::InvalidConfig(_) => "InvalidConfig",
            Self::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, MfgfError>;
