use crate::risk::RiskCurve;
use crate::{MfgfError, Result};

/// Percentile of ascending `sorted` at probability `p`, interpolating
/// linearly at position `p * (m - 1)`.
pub fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    let m = sorted.len();
    if m == 1 {
        return sorted[0];
    }
    let pos = p * (m - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(m - 1);
    let frac = pos - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

/// Pointwise percentiles of a family of curves on a shared grid, one
/// output curve per probability.
pub fn aggregate_percentiles(curves: &[RiskCurve], probs: &[f64]) -> Result<Vec<RiskCurve>> {
    let first = curves.first().ok_or(MfgfError::EmptyInput)?;
    if curves.iter().any(|c| c.grid != first.grid || c.values.len() != first.values.len()) {
        return Err(MfgfError::GridMismatch);
    }
    if let Some(&p) = probs.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
        return Err(MfgfError::InvalidConfig(format!("percentile probability {p} not in (0, 1)")));
    }
    let mut out: Vec<Vec<f64>> = vec![Vec::with_capacity(first.values.len()); probs.len()];
    let mut column = vec![0.0; curves.len()];
    for i in 0..first.values.len() {
        for (slot, c) in column.iter_mut().zip(curves) {
            *slot = c.values[i];
        }
        column.sort_by(f64::total_cmp);
        for (vals, &p) in out.iter_mut().zip(probs) {
            vals.push(percentile_sorted(&column, p));
        }
    }
    Ok(out.into_iter().map(|v| RiskCurve::new(first.grid.clone(), v, first.kind)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` ascending edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Equal-width histogram over `range`, or over the observed range when
/// `range` is `None`.
///
/// Bins are half-open `[lo, hi)` except the last, which also takes its
/// upper edge. Values outside an explicit range are counted in the nearest
/// end bin, so counts always sum to `values.len()`. When all values are
/// equal the range is widened to one unit centred on them.
pub fn histogram(values: &[f64], bins: usize, range: Option<(f64, f64)>) -> Result<Histogram> {
    if values.is_empty() {
        return Err(MfgfError::EmptyInput);
    }
    if bins == 0 {
        return Err(MfgfError::InvalidConfig("histogram needs at least one bin".into()));
    }
    let (mut lo, mut hi) = match range {
        Some(r) => r,
        None => values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v))),
    };
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(MfgfError::InvalidConfig(format!("invalid histogram range [{lo}, {hi}]")));
    }
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    edges[bins] = hi;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = if v <= lo { 0 } else { (((v - lo) / width).floor() as usize).min(bins - 1) };
        counts[idx] += 1;
    }
    Ok(Histogram { edges, counts })
}
