use super::{check_knots, lerp_table};
use crate::{MfgfError, Result};
use statrs::function::erf::erfc;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn std_normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Density of the standard normal restricted to `[lo, hi]`.
pub fn truncated_normal_density(y: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(MfgfError::DegenerateSupport { lo, hi });
    }
    if y < lo || y > hi {
        return Ok(0.0);
    }
    Ok(std_normal_pdf(y) / (std_normal_cdf(hi) - std_normal_cdf(lo)))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    TruncatedStdNormal {
        lo: f64,
        hi: f64,
    },
    /// Piecewise-linear density through `(knots[i], density[i])`, normalised
    /// at construction.
    Tabulated {
        knots: Vec<f64>,
        density: Vec<f64>,
    },
    /// All mass at one point. Has no density; true risks reduce to a single
    /// loss evaluation.
    PointMass {
        at: f64,
    },
}

/// The data-generating distribution used for oracle risk computations and
/// for simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct TrueModel {
    kind: ModelKind,
    normaliser: f64,
}

impl TrueModel {
    pub fn truncated_std_normal(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(MfgfError::DegenerateSupport { lo, hi });
        }
        let mass = std_normal_cdf(hi) - std_normal_cdf(lo);
        if !(mass > 0.0) {
            return Err(MfgfError::DegenerateSupport { lo, hi });
        }
        Ok(Self { kind: ModelKind::TruncatedStdNormal { lo, hi }, normaliser: mass })
    }

    pub fn tabulated(knots: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        check_knots(&knots, "density")?;
        if knots.len() != density.len() {
            return Err(MfgfError::InvalidGrid("knots and density differ in length".into()));
        }
        if density.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(MfgfError::InvalidConfig("density values must be finite and >= 0".into()));
        }
        // trapezoid rule is exact for the interpolant
        let mass: f64 =
            knots.windows(2).zip(density.windows(2)).map(|(k, d)| 0.5 * (k[1] - k[0]) * (d[0] + d[1])).sum();
        if !(mass > 0.0) {
            return Err(MfgfError::InvalidConfig("density has zero mass".into()));
        }
        let density = density.iter().map(|d| d / mass).collect();
        Ok(Self { kind: ModelKind::Tabulated { knots, density }, normaliser: 1.0 })
    }

    pub fn point_mass(at: f64) -> Result<Self> {
        if !at.is_finite() {
            return Err(MfgfError::InvalidConfig("point mass location must be finite".into()));
        }
        Ok(Self { kind: ModelKind::PointMass { at }, normaliser: 1.0 })
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    /// `(lo, hi)` of the support.
    pub fn support(&self) -> (f64, f64) {
        match &self.kind {
            ModelKind::TruncatedStdNormal { lo, hi } => (*lo, *hi),
            ModelKind::Tabulated { knots, .. } => (knots[0], knots[knots.len() - 1]),
            ModelKind::PointMass { at } => (*at, *at),
        }
    }

    /// Density at `y`; `None` for a point mass.
    pub fn density(&self, y: f64) -> Option<f64> {
        let (lo, hi) = self.support();
        match &self.kind {
            ModelKind::PointMass { .. } => None,
            _ if y < lo || y > hi => Some(0.0),
            ModelKind::TruncatedStdNormal { .. } => Some(std_normal_pdf(y) / self.normaliser),
            ModelKind::Tabulated { knots, density } => Some(lerp_table(knots, density, y)),
        }
    }

    /// Upper bound on the density, used as the rejection-sampling envelope.
    pub(crate) fn density_max(&self) -> Option<f64> {
        match &self.kind {
            ModelKind::PointMass { .. } => None,
            ModelKind::TruncatedStdNormal { lo, hi } => {
                let mode = 0.0f64.clamp(*lo, *hi);
                Some(std_normal_pdf(mode) / self.normaliser)
            }
            ModelKind::Tabulated { density, .. } => Some(density.iter().copied().fold(0.0, f64::max)),
        }
    }

    /// Breakpoints of the density inside the support (knots for tabulated
    /// densities), used to split quadrature intervals.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            ModelKind::Tabulated { knots, .. } => knots.clone(),
            _ => Vec::new(),
        }
    }
}
