use super::{closed_form_unchecked, upper_risk_general};
use crate::conformal::{focal_sets, NonconformityScore};
use crate::data_model::{BoundedSample, LossSpec, ThetaGrid};
use crate::numerics::golden_min;
use crate::Result;

const REFINE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimizer {
    pub theta: f64,
    pub value: f64,
}

/// Minimises the identity-score upper risk over `grid`.
///
/// Takes the grid argmin (lowest index on ties). For convex losses the
/// closed form is used and the argmin is refined by golden-section search
/// over the neighbouring cells; the refined point replaces the grid point
/// only if it is strictly better. Non-convex losses use the focal-set sum
/// and return the grid argmin as is.
pub fn minimize_upper_risk(loss: &LossSpec, sample: &BoundedSample, grid: &ThetaGrid) -> Result<Minimizer> {
    for theta in [grid.lo(), grid.hi()] {
        loss.check_theta(theta)?;
    }
    let pts = grid.points();
    if !loss.convex_in_y() {
        let focal = focal_sets(sample, &NonconformityScore::Identity, None)?;
        let values =
            pts.iter().map(|&t| upper_risk_general(loss, &focal, t).map(|u| u.value)).collect::<Result<Vec<f64>>>()?;
        let (best, value) = argmin(&values);
        return Ok(Minimizer { theta: pts[best], value });
    }
    let risk = |theta: f64| closed_form_unchecked(loss, sample, theta).total;
    let values: Vec<f64> = pts.iter().map(|&t| risk(t)).collect();
    let (best, best_val) = argmin(&values);
    let mut out = Minimizer { theta: pts[best], value: best_val };
    if pts.len() > 1 {
        let a = pts[best.saturating_sub(1)];
        let b = pts[(best + 1).min(pts.len() - 1)];
        let (theta, value) = golden_min(risk, a, b, REFINE_TOL);
        if value < out.value {
            out = Minimizer { theta, value };
        }
    }
    Ok(out)
}

/// First index of the smallest value.
fn argmin(values: &[f64]) -> (usize, f64) {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    (best, values[best])
}
