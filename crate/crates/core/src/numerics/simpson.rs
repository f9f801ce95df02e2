use crate::{MfgfError, Result};

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    /// Absolute error target over the whole interval.
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-8, max_depth: 40 }
    }
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn new(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fb: f64) -> Self {
        let m = 0.5 * (a + b);
        let fm = f(m);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        Self { a, b, fa, fm, fb, whole }
    }
}

/// Adaptive Simpson integration of `f` over `[a, b]`.
///
/// Each panel is split until the two-halves estimate agrees with the
/// whole-panel estimate to `15 * tol` (the local tolerance halves with each
/// split). Fails if a panel at `max_depth` still misses its tolerance.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, cfg: QuadConfig) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let root = Panel::new(&f, lo, hi, f(lo), f(hi));
    let v = recurse(&f, root, cfg.abs_tol, cfg.max_depth).ok_or(MfgfError::QuadratureNonconvergence { lo, hi })?;
    Ok(sign * v)
}

fn recurse(f: &impl Fn(f64) -> f64, p: Panel, tol: f64, depth: u32) -> Option<f64> {
    let m = 0.5 * (p.a + p.b);
    let left = Panel::new(f, p.a, m, p.fa, p.fm);
    let right = Panel::new(f, m, p.b, p.fm, p.fb);
    let delta = left.whole + right.whole - p.whole;
    if delta.abs() <= 15.0 * tol {
        return Some(left.whole + right.whole + delta / 15.0);
    }
    if depth == 0 || !delta.is_finite() {
        return None;
    }
    let l = recurse(f, left, 0.5 * tol, depth - 1)?;
    let r = recurse(f, right, 0.5 * tol, depth - 1)?;
    Some(l + r)
}

/// Integrates over `[a, b]` split at `breaks` (points outside the interval
/// are ignored), sharing the tolerance across pieces in proportion to their
/// length.
pub fn integrate_piecewise(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], cfg: QuadConfig) -> Result<f64> {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| a < x && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);
    let width = b - a;
    let mut total = 0.0;
    for w in edges.windows(2) {
        let share = QuadConfig { abs_tol: cfg.abs_tol * (w[1] - w[0]) / width, ..cfg };
        total += integrate(&f, w[0], w[1], share)?;
    }
    Ok(total)
}
