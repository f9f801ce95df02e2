//! Risk functionals over a parameter `theta`: empirical risk, true risk under
//! a known model, and the upper risk (upper prevision of the loss) under the
//! focal-set distribution, together with upper-risk minimisation.
//!
//! The upper risk is the focal-set average of per-set loss suprema,
//!
//! ```text
//! R_up(theta) = 1/(n+1) * sum_{v=1..n+1} sup_{y in A(v)} l(theta, y).
//! ```
//!
//! With the identity score and a loss convex in `y`, every supremum sits at
//! an endpoint of its gap, and the sum collapses to
//!
//! ```text
//! R_up(theta) = [ n R_n(theta) + M(theta) ] / (n+1),
//! M(theta)    = l(theta, a) + l(theta, b) - min_{0<=j<=n+1} l(theta, Y_j),
//! ```
//!
//! where the minimum runs over the data and both support endpoints.

mod curve;
mod minimize;

pub use curve::{risk_curve, CurveKind, RiskCurve, RiskSource};
pub use minimize::{minimize_upper_risk, Minimizer};

use crate::conformal::{FocalSystem, Representation};
use crate::data_model::{BoundedSample, LossSpec, ModelKind, TrueModel};
use crate::numerics::{integrate_piecewise, QuadConfig};
use crate::{MfgfError, Result};

/// Points per focal component when a non-convex loss forces a grid search
/// for the supremum.
pub const NONCONVEX_SUP_POINTS: usize = 513;

/// A supremum, flagged `approximate` when it came from a grid search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Supremum {
    pub value: f64,
    pub approximate: bool,
}

/// Upper risk split into its empirical and slack parts:
/// `total = empirical_part + slack` with `empirical_part = n R_n / (n+1)` and
/// `slack = M(theta) / (n+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperRiskDecomposition {
    pub theta: f64,
    pub empirical_part: f64,
    pub slack: f64,
    pub m_theta: f64,
    pub total: f64,
}

pub fn empirical_risk(loss: &LossSpec, sample: &BoundedSample, theta: f64) -> Result<f64> {
    loss.check_theta(theta)?;
    Ok(empirical_risk_unchecked(loss, sample, theta))
}

pub(crate) fn empirical_risk_unchecked(loss: &LossSpec, sample: &BoundedSample, theta: f64) -> f64 {
    sample.values().iter().map(|&y| loss.eval(theta, y)).sum::<f64>() / sample.n() as f64
}

/// Expected loss under `model`, by adaptive Simpson quadrature (absolute
/// tolerance 1e-8, depth 40) split at the loss kinks and density knots.
pub fn true_risk(loss: &LossSpec, model: &TrueModel, theta: f64) -> Result<f64> {
    loss.check_theta(theta)?;
    if let ModelKind::PointMass { at } = model.kind() {
        return Ok(loss.eval(theta, *at));
    }
    let (lo, hi) = model.support();
    let mut breaks = loss.kinks_in_y(theta);
    breaks.extend(model.breakpoints());
    let integrand = |y: f64| loss.eval(theta, y) * model.density(y).unwrap_or(0.0);
    integrate_piecewise(integrand, lo, hi, &breaks, QuadConfig::default())
}

/// Supremum of `l(theta, .)` over the closure of `(lo, hi)`.
///
/// For a loss attested convex in `y` this is the larger endpoint value;
/// otherwise the interval is scanned on a 513-point grid and the result is
/// marked approximate.
pub fn sup_on_interval(loss: &LossSpec, theta: f64, lo: f64, hi: f64) -> Result<Supremum> {
    if !(lo <= hi) {
        return Err(MfgfError::InvalidConfig(format!("interval [{lo}, {hi}] is reversed")));
    }
    if loss.convex_in_y() {
        return Ok(Supremum { value: loss.eval(theta, lo).max(loss.eval(theta, hi)), approximate: false });
    }
    Ok(Supremum { value: grid_sup(loss, theta, lo, hi), approximate: true })
}

fn grid_sup(loss: &LossSpec, theta: f64, lo: f64, hi: f64) -> f64 {
    let m = NONCONVEX_SUP_POINTS - 1;
    (0..=m)
        .map(|i| if i == m { hi } else { lo + (hi - lo) * i as f64 / m as f64 })
        .map(|y| loss.eval(theta, y))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Upper risk from the focal-set sum; works for any focal system.
///
/// Grid level sets take the maximum over each component's member grid
/// points and its two boundary points. An unattained focal set contributes
/// zero.
pub fn upper_risk_general(loss: &LossSpec, focal: &FocalSystem, theta: f64) -> Result<Supremum> {
    loss.check_theta(theta)?;
    let mut approximate = false;
    let mut sum = 0.0;
    for set in focal.sets() {
        let mut best: Option<f64> = None;
        for c in &set.components {
            let mut s = sup_on_interval(loss, theta, c.lo, c.hi)?;
            if let (Some((a, b)), Representation::GridLevelSets { grid, .. }) = (c.grid_run, focal.representation()) {
                for &y in &grid.points()[a..=b] {
                    s.value = s.value.max(loss.eval(theta, y));
                }
            }
            approximate |= s.approximate;
            best = Some(best.map_or(s.value, |b: f64| b.max(s.value)));
        }
        sum += best.unwrap_or(0.0);
    }
    Ok(Supremum { value: sum / (focal.n() + 1) as f64, approximate })
}

/// Closed-form upper risk for the identity score and a convex loss.
pub fn upper_risk_closed_form(loss: &LossSpec, sample: &BoundedSample, theta: f64) -> Result<UpperRiskDecomposition> {
    if !loss.convex_in_y() {
        return Err(MfgfError::NonConvexLoss);
    }
    loss.check_theta(theta)?;
    Ok(closed_form_unchecked(loss, sample, theta))
}

pub(crate) fn closed_form_unchecked(loss: &LossSpec, sample: &BoundedSample, theta: f64) -> UpperRiskDecomposition {
    let n = sample.n() as f64;
    let at_a = loss.eval(theta, sample.support_lo());
    let at_b = loss.eval(theta, sample.support_hi());
    let mut data_sum = 0.0;
    let mut min = at_a.min(at_b);
    for &y in sample.values() {
        let l = loss.eval(theta, y);
        data_sum += l;
        min = min.min(l);
    }
    let m_theta = at_a + at_b - min;
    let empirical_part = data_sum / (n + 1.0);
    let slack = m_theta / (n + 1.0);
    UpperRiskDecomposition { theta, empirical_part, slack, m_theta, total: (data_sum + m_theta) / (n + 1.0) }
}
