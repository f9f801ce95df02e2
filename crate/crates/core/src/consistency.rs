//! Concentration constants and Monte Carlo checks of the consistency
//! guarantees for the upper risk.
//!
//! For a loss convex in `y` on `[a, b]`, with
//! `M = sup_theta l(theta, a) + sup_theta l(theta, b)` and
//! `L(theta) = sup_y l(theta, y) - inf_y l(theta, y)`, once
//! `n >= 3M/eps - 1`,
//!
//! ```text
//! P{ |R_up(theta) - R(theta)| > eps } <= 2 exp(-(2/9) n eps^2 / L(theta)^2).
//! ```
//!
//! Uniform statements need a witness sample size `g(eps, alpha)`; here it is
//! the Hoeffding union bound over a finite theta grid, so uniform checks
//! cover the grid only.

use rayon::prelude::*;
use serde::Serialize;

use crate::data_model::{LossSpec, ThetaGrid, TrueModel};
use crate::numerics::{golden_max, golden_min};
use crate::risk::{closed_form_unchecked, true_risk, NONCONVEX_SUP_POINTS};
use crate::sim::{sample_model, stream_rng};
use crate::{MfgfError, Result};

const GOLDEN_TOL: f64 = 1e-12;
/// Theta grid used for `M` when only the loss's domain is known.
const DOMAIN_GRID_POINTS: usize = 1001;

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyConstants {
    /// `sup_theta l(theta, a) + sup_theta l(theta, b)`.
    pub m: f64,
    /// `(theta, L(theta))` for each grid point.
    pub loss_range: Vec<(f64, f64)>,
    /// Largest `L(theta)` over the grid.
    pub l_max: f64,
}

/// Supremum over the grid of `f`, refined by golden section on the cells
/// around the best grid point when `refine` is set.
fn sup_over_grid(f: impl Fn(f64) -> f64, grid: &ThetaGrid, refine: bool) -> f64 {
    let pts = grid.points();
    let (mut best, mut best_val) = (0, f(pts[0]));
    for (i, &t) in pts.iter().enumerate().skip(1) {
        let v = f(t);
        if v > best_val {
            best = i;
            best_val = v;
        }
    }
    if refine && pts.len() > 1 {
        for (a, b) in [(best.saturating_sub(1), best), (best, (best + 1).min(pts.len() - 1))] {
            if a != b {
                best_val = best_val.max(golden_max(&f, pts[a], pts[b], GOLDEN_TOL).1);
            }
        }
    }
    best_val
}

/// `L(theta)`: the range of `l(theta, .)` over `[a, b]`.
///
/// Convex losses take the sup at an endpoint and the inf by golden section;
/// otherwise both come from a 513-point scan.
pub fn loss_range(loss: &LossSpec, a: f64, b: f64, theta: f64) -> f64 {
    let f = |y: f64| loss.eval(theta, y);
    let (sup, inf) = if loss.convex_in_y() {
        let sup = f(a).max(f(b));
        let inf = golden_min(f, a, b, GOLDEN_TOL).1.min(f(a)).min(f(b));
        (sup, inf)
    } else {
        let m = NONCONVEX_SUP_POINTS - 1;
        (0..=m)
            .map(|i| f(if i == m { b } else { a + (b - a) * i as f64 / m as f64 }))
            .fold((f64::NEG_INFINITY, f64::INFINITY), |(s, i), v| (s.max(v), i.min(v)))
    };
    (sup - inf).max(0.0)
}

pub fn constants(loss: &LossSpec, support: (f64, f64), theta_grid: &ThetaGrid) -> Result<ConsistencyConstants> {
    let (a, b) = support;
    if !(a < b) {
        return Err(MfgfError::DegenerateSupport { lo: a, hi: b });
    }
    let refine = loss.smooth_in_theta();
    let m =
        sup_over_grid(|t| loss.eval(t, a), theta_grid, refine) + sup_over_grid(|t| loss.eval(t, b), theta_grid, refine);
    let loss_range: Vec<(f64, f64)> =
        theta_grid.points().iter().map(|&t| (t, self::loss_range(loss, a, b, t))).collect();
    let l_max = loss_range.iter().map(|&(_, l)| l).fold(0.0, f64::max);
    Ok(ConsistencyConstants { m, loss_range, l_max })
}

/// `M` over the loss's whole parameter domain.
pub fn m_over_domain(loss: &LossSpec, support: (f64, f64)) -> Result<f64> {
    let dom = loss.theta_domain();
    let grid =
        if dom.lo == dom.hi { ThetaGrid::single(dom.lo)? } else { ThetaGrid::new(dom.lo, dom.hi, DOMAIN_GRID_POINTS)? };
    let (a, b) = support;
    let refine = loss.smooth_in_theta();
    Ok(sup_over_grid(|t| loss.eval(t, a), &grid, refine) + sup_over_grid(|t| loss.eval(t, b), &grid, refine))
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(MfgfError::NonpositiveEpsilon(epsilon))
    }
}

/// `ceil(3M/eps - 1)`, at least 1.
pub fn min_sample_size(epsilon: f64, m: f64) -> Result<usize> {
    check_epsilon(epsilon)?;
    Ok(((3.0 * m / epsilon - 1.0).ceil().max(1.0)) as usize)
}

/// Whether `n >= 3M/eps - 1`.
pub fn threshold_met(n: usize, epsilon: f64, m: f64) -> bool {
    n as f64 >= 3.0 * m / epsilon - 1.0
}

/// `2 exp(-(2/9) n eps^2 / L^2)`, uncapped (values above 1 are vacuous).
/// A zero range means the loss is constant in `y` and the bound is 0.
pub fn hoeffding_bound(n: usize, epsilon: f64, l: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if n == 0 {
        return Err(MfgfError::InvalidConfig("n must be at least 1".into()));
    }
    if l <= 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * (-(2.0 / 9.0) * n as f64 * epsilon * epsilon / (l * l)).exp())
}

/// Smallest `n` with `|grid| * 2 exp(-2 n eps^2 / L^2) < alpha`.
pub fn witness_uniform(grid_size: usize, epsilon: f64, alpha: f64, l_max: f64) -> Result<usize> {
    check_epsilon(epsilon)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(MfgfError::InvalidAlpha(alpha));
    }
    if grid_size == 0 {
        return Err(MfgfError::InvalidGrid("empty theta grid".into()));
    }
    if l_max <= 0.0 {
        return Ok(1);
    }
    let g = grid_size as f64;
    let holds = |n: usize| g * 2.0 * (-2.0 * n as f64 * epsilon * epsilon / (l_max * l_max)).exp() < alpha;
    let guess = (l_max * l_max / (2.0 * epsilon * epsilon) * (2.0 * g / alpha).ln()).ceil().max(1.0) as usize;
    // the closed form can land one off when the bound is hit exactly
    let mut n = guess;
    while !holds(n) {
        n += 1;
    }
    while n > 1 && holds(n - 1) {
        n -= 1;
    }
    Ok(n)
}

/// Outcome of a pointwise Monte Carlo check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub epsilon: f64,
    pub n: usize,
    pub threshold_met: bool,
    pub bound: f64,
    pub empirical_violation_rate: f64,
    pub replications: usize,
    pub seed: u64,
    pub theta: f64,
    pub loss_range: f64,
    pub m: f64,
    pub min_sample_size: usize,
    pub violations: usize,
}

impl BoundReport {
    /// Bound plus three Monte Carlo standard errors.
    pub fn allowance(&self) -> f64 {
        let p = self.bound.clamp(0.0, 1.0);
        self.bound + 3.0 * (p * (1.0 - p) / self.replications as f64).sqrt()
    }

    /// Whether the violation rate is within [`allowance`](Self::allowance);
    /// `None` when the sample-size threshold is not met and the bound is not
    /// asserted.
    pub fn respects_bound(&self) -> Option<bool> {
        self.threshold_met.then(|| self.empirical_violation_rate <= self.allowance())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

const MIN_REPLICATIONS: usize = 100;

/// Fraction of `replications` samples of size `n` whose closed-form upper
/// risk at `theta` misses the true risk by more than `epsilon`.
#[allow(clippy::too_many_arguments)]
pub fn verify_pointwise(
    model: &TrueModel,
    loss: &LossSpec,
    theta: f64,
    n: usize,
    epsilon: f64,
    replications: usize,
    seed: u64,
) -> Result<BoundReport> {
    check_epsilon(epsilon)?;
    if replications < MIN_REPLICATIONS {
        return Err(MfgfError::InvalidConfig(format!("need at least {MIN_REPLICATIONS} replications")));
    }
    if !loss.convex_in_y() {
        return Err(MfgfError::NonConvexLoss);
    }
    let support = model.support();
    let truth = true_risk(loss, model, theta)?;
    let m = m_over_domain(loss, support)?;
    let l = loss_range(loss, support.0, support.1, theta);
    let violations = (0..replications)
        .into_par_iter()
        .map(|r| -> Result<usize> {
            let mut rng = stream_rng(seed, n as u64, r as u64);
            let sample = sample_model(model, n, &mut rng)?;
            let upper = closed_form_unchecked(loss, &sample, theta).total;
            Ok(usize::from((upper - truth).abs() > epsilon))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(BoundReport {
        epsilon,
        n,
        threshold_met: threshold_met(n, epsilon, m),
        bound: hoeffding_bound(n, epsilon, l)?,
        empirical_violation_rate: violations as f64 / replications as f64,
        replications,
        seed,
        theta,
        loss_range: l,
        m,
        min_sample_size: min_sample_size(epsilon, m)?,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformReport {
    pub epsilon: f64,
    pub alpha: f64,
    pub n: usize,
    pub witness: usize,
    pub min_sample_size: usize,
    pub grid_size: usize,
    pub l_max: f64,
    pub m: f64,
    pub replications: usize,
    pub seed: u64,
    /// Estimated `P{ max_grid |R_up - R| > eps }`.
    pub estimate: f64,
    pub below_alpha: bool,
    pub max_deviation: f64,
}

impl UniformReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Monte Carlo check of the uniform guarantee over `theta_grid`, at
/// `n = max(witness, ceil(3M/eps - 1))`.
pub fn verify_uniform(
    model: &TrueModel,
    loss: &LossSpec,
    theta_grid: &ThetaGrid,
    epsilon: f64,
    alpha: f64,
    replications: usize,
    seed: u64,
) -> Result<UniformReport> {
    check_epsilon(epsilon)?;
    if replications < MIN_REPLICATIONS {
        return Err(MfgfError::InvalidConfig(format!("need at least {MIN_REPLICATIONS} replications")));
    }
    if !loss.convex_in_y() {
        return Err(MfgfError::NonConvexLoss);
    }
    let support = model.support();
    let c = constants(loss, support, theta_grid)?;
    let witness = witness_uniform(theta_grid.count(), epsilon, alpha, c.l_max)?;
    let min_n = min_sample_size(epsilon, c.m)?;
    let n = witness.max(min_n);
    let truth = theta_grid.points().iter().map(|&t| true_risk(loss, model, t)).collect::<Result<Vec<f64>>>()?;
    let deviations = (0..replications)
        .into_par_iter()
        .map(|r| -> Result<f64> {
            let mut rng = stream_rng(seed, n as u64, r as u64);
            let sample = sample_model(model, n, &mut rng)?;
            Ok(theta_grid
                .points()
                .iter()
                .zip(&truth)
                .map(|(&t, &rt)| (closed_form_unchecked(loss, &sample, t).total - rt).abs())
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;
    let exceed = deviations.iter().filter(|&&d| d > epsilon).count();
    let estimate = exceed as f64 / replications as f64;
    Ok(UniformReport {
        epsilon,
        alpha,
        n,
        witness,
        min_sample_size: min_n,
        grid_size: theta_grid.count(),
        l_max: c.l_max,
        m: c.m,
        replications,
        seed,
        estimate,
        below_alpha: estimate < alpha,
        max_deviation: deviations.iter().copied().fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data_model::Interval;

    fn sq() -> LossSpec {
        LossSpec::squared(Interval::new(-1.0, 1.0).unwrap())
    }

    #[test]
    fn constants_squared_loss() {
        let g = ThetaGrid::new(-1.0, 1.0, 41).unwrap();
        let c = constants(&sq(), (-3.0, 3.0), &g).unwrap();
        assert!((c.m - 32.0).abs() < 1e-9);
        let l0 = c.loss_range.iter().find(|(t, _)| *t == 0.0).unwrap().1;
        assert!((l0 - 9.0).abs() < 1e-9);
        // L(theta) = (3 + |theta|)^2
        assert!((c.l_max - 16.0).abs() < 1e-9);
        assert!((m_over_domain(&sq(), (-3.0, 3.0)).unwrap() - 32.0).abs() < 1e-9);
    }

    #[test]
    fn constants_off_grid_supremum_is_refined() {
        // sup of -(theta - 0.37)^2 + 5 at an off-grid theta; convex-in-y
        // squared loss can't show this, so use l(theta, a) directly
        let g = ThetaGrid::new(0.0, 1.0, 11).unwrap();
        let v = sup_over_grid(|t| 5.0 - (t - 0.37) * (t - 0.37), &g, true);
        assert!((v - 5.0).abs() < 1e-12);
        let raw = sup_over_grid(|t| 5.0 - (t - 0.37) * (t - 0.37), &g, false);
        assert!(raw < 5.0);
    }

    #[test]
    fn constants_constant_loss() {
        let loss = LossSpec::constant(1.5, Interval::new(-1.0, 1.0).unwrap()).unwrap();
        let g = ThetaGrid::new(-1.0, 1.0, 5).unwrap();
        let c = constants(&loss, (-3.0, 3.0), &g).unwrap();
        assert_eq!(c.m, 3.0);
        assert!(c.loss_range.iter().all(|&(_, l)| l == 0.0));
    }

    #[test]
    fn min_sample_size_examples() {
        assert_eq!(min_sample_size(1.0, 32.0).unwrap(), 95);
        assert_eq!(min_sample_size(0.3, 0.0).unwrap(), 1);
        assert_eq!(min_sample_size(0.5, 32.0).unwrap(), 191);
        assert!(matches!(min_sample_size(0.0, 1.0), Err(MfgfError::NonpositiveEpsilon(_))));
    }

    #[test]
    fn hoeffding_examples() {
        let b = hoeffding_bound(10_000, 0.9, 9.0).unwrap();
        assert!((b - 2.0 * (-200.0f64 / 9.0).exp()).abs() < 1e-20);
        assert!((b - 4.46e-10).abs() < 0.01e-10);
        let v = hoeffding_bound(100, 0.9, 9.0).unwrap();
        assert!((v - 2.0 * (-2.0f64 / 9.0).exp()).abs() < 1e-15);
        assert!(v > 1.0);
        assert_eq!(hoeffding_bound(100, 0.9, 0.0).unwrap(), 0.0);
        assert!(hoeffding_bound(100, -1.0, 1.0).is_err());
    }

    #[test]
    fn hoeffding_monotone() {
        let base = hoeffding_bound(50, 0.5, 3.0).unwrap();
        assert!(hoeffding_bound(51, 0.5, 3.0).unwrap() < base);
        assert!(hoeffding_bound(50, 0.6, 3.0).unwrap() < base);
        assert!(hoeffding_bound(50, 0.5, 3.5).unwrap() > base);
    }

    #[test]
    fn witness_examples() {
        let e2 = (-2.0f64).exp();
        // exactly at the boundary the strict inequality needs one more
        assert_eq!(witness_uniform(1, 3.0, 2.0 * e2, 3.0).unwrap(), 2);
        assert_eq!(witness_uniform(1, 3.0, 2.0 * e2 * (1.0 + 1e-9), 3.0).unwrap(), 1);
        assert!(witness_uniform(4, 0.5, 0.9, 1.0).unwrap() <= witness_uniform(4, 0.5, 0.1, 1.0).unwrap());
        assert!(witness_uniform(4, 0.5, 1.0, 1.0).is_err());
        assert!(witness_uniform(4, 0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn witness_defining_inequality() {
        for (g, eps, alpha, l) in
            [(41, 0.5, 0.05, 16.0), (1, 0.1, 0.5, 1.0), (1000, 2.0, 0.001, 9.0), (7, 0.3, 0.2, 0.4)]
        {
            let n = witness_uniform(g, eps, alpha, l).unwrap();
            let f = |n: usize| g as f64 * 2.0 * (-2.0 * n as f64 * eps * eps / (l * l)).exp();
            assert!(f(n) < alpha);
            if n > 1 {
                assert!(f(n - 1) >= alpha);
            }
            let doubled = witness_uniform(2 * g, eps, alpha, l).unwrap();
            let step = (l * l / (2.0 * eps * eps) * 2f64.ln()).ceil() as usize;
            assert!(doubled >= n && doubled - n <= step, "{doubled} {n} {step}");
        }
    }

    #[test]
    fn pointwise_constant_loss_never_violates() {
        let m = TrueModel::truncated_std_normal(-3.0, 3.0).unwrap();
        let loss = LossSpec::constant(2.0, Interval::new(-1.0, 1.0).unwrap()).unwrap();
        let r = verify_pointwise(&m, &loss, 0.0, 30, 0.01, 200, 3).unwrap();
        assert_eq!(r.empirical_violation_rate, 0.0);
        assert_eq!(r.bound, 0.0);
    }

    #[test]
    fn pointwise_below_threshold_not_asserted() {
        let m = TrueModel::truncated_std_normal(-3.0, 3.0).unwrap();
        let r = verify_pointwise(&m, &sq(), 0.0, 20, 0.5, 100, 3).unwrap();
        assert!(!r.threshold_met);
        assert_eq!(r.min_sample_size, 191);
        assert_eq!(r.respects_bound(), None);
        assert!(verify_pointwise(&m, &sq(), 0.0, 20, 0.5, 99, 3).is_err());
    }

    #[test]
    fn report_json_key_order() {
        let m = TrueModel::truncated_std_normal(-3.0, 3.0).unwrap();
        let r = verify_pointwise(&m, &sq(), 0.0, 200, 0.5, 100, 3).unwrap();
        let js = r.to_json();
        let keys = ["epsilon", "n", "threshold_met", "bound", "empirical_violation_rate", "replications", "seed"];
        let pos: Vec<usize> = keys.iter().map(|k| js.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn uniform_constant_loss_is_zero() {
        let m = TrueModel::truncated_std_normal(-3.0, 3.0).unwrap();
        let loss = LossSpec::constant(2.0, Interval::new(-1.0, 1.0).unwrap()).unwrap();
        let g = ThetaGrid::new(-1.0, 1.0, 5).unwrap();
        let r = verify_uniform(&m, &loss, &g, 0.1, 0.05, 100, 1).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert!(r.below_alpha);
    }
}
