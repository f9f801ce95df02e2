use rayon::prelude::*;

use super::{empirical_risk, true_risk, upper_risk_closed_form, upper_risk_general};
use crate::conformal::FocalSystem;
use crate::data_model::{BoundedSample, LossSpec, ThetaGrid, TrueModel};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveKind {
    Empirical,
    True,
    Upper,
}

impl CurveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Empirical => "empirical",
            Self::True => "true",
            Self::Upper => "upper",
        }
    }
}

/// What a risk curve is computed from.
#[derive(Debug, Clone, Copy)]
pub enum RiskSource<'a> {
    Empirical(&'a BoundedSample),
    True(&'a TrueModel),
    /// Closed-form upper risk (identity score, convex loss).
    UpperClosedForm(&'a BoundedSample),
    /// Upper risk from the focal-set sum.
    UpperGeneral(&'a FocalSystem),
}

impl RiskSource<'_> {
    pub fn kind(&self) -> CurveKind {
        match self {
            Self::Empirical(_) => CurveKind::Empirical,
            Self::True(_) => CurveKind::True,
            Self::UpperClosedForm(_) | Self::UpperGeneral(_) => CurveKind::Upper,
        }
    }
}

/// Risk values on a theta grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskCurve {
    pub grid: ThetaGrid,
    pub values: Vec<f64>,
    pub kind: CurveKind,
}

impl RiskCurve {
    pub fn new(grid: ThetaGrid, values: Vec<f64>, kind: CurveKind) -> Self {
        debug_assert_eq!(grid.count(), values.len());
        Self { grid, values, kind }
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().iter().copied().zip(self.values.iter().copied())
    }
}

/// Evaluates the risk of `source` at every grid point. Points are computed
/// in parallel into their own slots, so the result does not depend on
/// scheduling.
pub fn risk_curve(loss: &LossSpec, source: RiskSource<'_>, grid: &ThetaGrid) -> Result<RiskCurve> {
    let values = grid
        .points()
        .par_iter()
        .map(|&theta| match source {
            RiskSource::Empirical(s) => empirical_risk(loss, s, theta),
            RiskSource::True(m) => true_risk(loss, m, theta),
            RiskSource::UpperClosedForm(s) => upper_risk_closed_form(loss, s, theta).map(|d| d.total),
            RiskSource::UpperGeneral(f) => upper_risk_general(loss, f, theta).map(|u| u.value),
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(RiskCurve::new(grid.clone(), values, source.kind()))
}
