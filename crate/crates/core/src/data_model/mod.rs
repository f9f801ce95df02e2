//! Value types shared by every other module: bounded samples, loss
//! functions, parameter grids and the data-generating model used to compute
//! oracle (true) risks.
//!
//! All types are immutable once built and are `Send + Sync`.

mod grid;
mod loss;
mod model;
mod sample;

pub use grid::ThetaGrid;
pub use loss::{Interval, LossKind, LossSpec, TabulatedLoss};
pub use model::{std_normal_cdf, std_normal_pdf, truncated_normal_density, ModelKind, TrueModel};
pub use sample::BoundedSample;

/// Piecewise-linear interpolation on strictly increasing knots, clamped to
/// the end values outside the knot range.
pub(crate) fn lerp_table(knots: &[f64], values: &[f64], x: f64) -> f64 {
    debug_assert_eq!(knots.len(), values.len());
    let last = knots.len() - 1;
    if x <= knots[0] {
        return values[0];
    }
    if x >= knots[last] {
        return values[last];
    }
    // first knot strictly greater than x
    let hi = knots.partition_point(|&k| k <= x);
    let lo = hi - 1;
    let t = (x - knots[lo]) / (knots[hi] - knots[lo]);
    values[lo] + t * (values[hi] - values[lo])
}

pub(crate) fn check_knots(knots: &[f64], what: &str) -> crate::Result<()> {
    if knots.len() < 2 {
        return Err(crate::MfgfError::InvalidGrid(format!("{what} needs at least two knots")));
    }
    if knots.iter().any(|k| !k.is_finite()) || knots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(crate::MfgfError::InvalidGrid(format!("{what} knots must be finite and strictly increasing")));
    }
    Ok(())
}
