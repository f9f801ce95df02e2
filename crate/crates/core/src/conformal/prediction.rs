use super::focal::FocalSystem;
use crate::{MfgfError, Result};

/// `Omega(k)`, the union of the first `k` focal sets.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    pub k: usize,
    pub n: usize,
    /// Disjoint intervals, ascending; touching focal sets are merged.
    pub region: Vec<(f64, f64)>,
    pub nominal_coverage: f64,
}

/// Smallest `k` with `k >= (1 - alpha)(n + 1)`.
///
/// A relative slack of 1e-12 absorbs rounding in the product so that exact
/// integers are not pushed up to the next one.
pub fn k_for_alpha(n: usize, alpha: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(MfgfError::InvalidAlpha(alpha));
    }
    let target = (1.0 - alpha) * (n + 1) as f64;
    let k = (target - 1e-12 * (n + 1) as f64).ceil() as usize;
    Ok(k.clamp(1, n + 1))
}

/// Exact marginal coverage `k/(n+1)` of `Omega(k)`.
pub fn coverage_probability(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k > n + 1 {
        return Err(MfgfError::IndexOutOfRange { index: k, max: n + 1 });
    }
    Ok(k as f64 / (n + 1) as f64)
}

pub fn prediction_set(focal: &FocalSystem, alpha: f64) -> Result<PredictionSet> {
    let n = focal.n();
    let k = k_for_alpha(n, alpha)?;
    let mut parts: Vec<(f64, f64)> =
        focal.sets()[..k].iter().flat_map(|s| s.components.iter().map(|c| (c.lo, c.hi))).collect();
    parts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut region: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
    for (lo, hi) in parts {
        match region.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => region.push((lo, hi)),
        }
    }
    Ok(PredictionSet { k, n, region, nominal_coverage: coverage_probability(n, k)? })
}
