use rand::Rng;
use rand_distr::StandardNormal;

use crate::data_model::{std_normal_cdf, BoundedSample, ModelKind, TrueModel};
use crate::{MfgfError, Result};

// below this acceptance probability rejection sampling is refused
const MIN_ACCEPTANCE: f64 = 1e-4;

fn check_support(lo: f64, hi: f64) -> Result<()> {
    if !(lo < hi) {
        return Err(MfgfError::DegenerateSupport { lo, hi });
    }
    if std_normal_cdf(hi) - std_normal_cdf(lo) < MIN_ACCEPTANCE {
        return Err(MfgfError::InvalidConfig(format!(
            "standard normal mass on [{lo}, {hi}] is too small for rejection sampling"
        )));
    }
    Ok(())
}

fn draw_truncated_normal<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    loop {
        let z: f64 = rng.sample(StandardNormal);
        if lo <= z && z <= hi {
            return z;
        }
    }
}

/// `n` iid standard normal draws restricted to `[lo, hi]`, by rejection.
pub fn sample_truncated_normal<R: Rng + ?Sized>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Result<BoundedSample> {
    check_support(lo, hi)?;
    let raw: Vec<f64> = (0..n).map(|_| draw_truncated_normal(rng, lo, hi)).collect();
    BoundedSample::new(&raw, lo, hi)
}

/// One draw from `model`. Tabulated densities use a uniform proposal under
/// the density maximum.
pub fn draw_from_model<R: Rng + ?Sized>(model: &TrueModel, rng: &mut R) -> f64 {
    match model.kind() {
        ModelKind::TruncatedStdNormal { lo, hi } => draw_truncated_normal(rng, *lo, *hi),
        ModelKind::PointMass { at } => *at,
        ModelKind::Tabulated { .. } => {
            let (lo, hi) = model.support();
            let top = model.density_max().unwrap_or(0.0);
            loop {
                let y = rng.random_range(lo..=hi);
                let u: f64 = rng.random::<f64>() * top;
                if u < model.density(y).unwrap_or(0.0) {
                    return y;
                }
            }
        }
    }
}

/// `n` iid draws from `model` as a sample on the model's support.
pub fn sample_model<R: Rng + ?Sized>(model: &TrueModel, n: usize, rng: &mut R) -> Result<BoundedSample> {
    let (lo, hi) = model.support();
    if let ModelKind::TruncatedStdNormal { lo, hi } = model.kind() {
        check_support(*lo, *hi)?;
    }
    let raw: Vec<f64> = (0..n).map(|_| draw_from_model(model, rng)).collect();
    BoundedSample::new(&raw, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::stream_rng;

    #[test]
    fn truncated_normal_moments() {
        let mut rng = stream_rng(11, 0, 0);
        let s = sample_truncated_normal(1_000_000, -3.0, 3.0, &mut rng).unwrap();
        let v = s.values();
        assert!(v.iter().all(|&x| (-3.0..=3.0).contains(&x)));
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (v.len() - 1) as f64;
        assert!(mean.abs() < 0.005, "mean {mean}");
        // 1 - 6 phi(3) / (2 Phi(3) - 1)
        assert!((var - 0.973_337).abs() < 0.005, "var {var}");
    }

    #[test]
    fn deterministic_given_stream() {
        let a = sample_truncated_normal(50, -3.0, 3.0, &mut stream_rng(5, 20, 1)).unwrap();
        let b = sample_truncated_normal(50, -3.0, 3.0, &mut stream_rng(5, 20, 1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_support() {
        let mut rng = stream_rng(0, 0, 0);
        assert!(matches!(sample_truncated_normal(5, 1.0, 1.0, &mut rng), Err(MfgfError::DegenerateSupport { .. })));
        assert!(sample_truncated_normal(5, 30.0, 31.0, &mut rng).is_err());
    }

    #[test]
    fn tabulated_draws_follow_density() {
        // triangular density on [0, 2] peaking at 1: mean 1, P(Y < 0.5) = 1/8
        let m = TrueModel::tabulated(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        let mut rng = stream_rng(3, 0, 0);
        let s = sample_model(&m, 200_000, &mut rng).unwrap();
        let mean = s.values().iter().sum::<f64>() / s.n() as f64;
        let low = s.values().iter().filter(|&&y| y < 0.5).count() as f64 / s.n() as f64;
        assert!((mean - 1.0).abs() < 0.01);
        assert!((low - 0.125).abs() < 0.005);
    }
}
