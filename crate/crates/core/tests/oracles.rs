//! Reference values computed by routes independent of the library's
//! numerics: a positive-term erf series and closed-form moments.

use mfgf::data_model::{truncated_normal_density, Interval, LossSpec, TrueModel};
use mfgf::numerics::{integrate, QuadConfig};
use mfgf::risk::true_risk;

/// erf via the all-positive series
/// `erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_k 2^k x^(2k+1) / (1*3*...*(2k+1))`.
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    for k in 1..200 {
        term *= 2.0 * x * x / (2 * k + 1) as f64;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    2.0 / std::f64::consts::PI.sqrt() * (-x * x).exp() * sum
}

fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `Phi(3) - Phi(-3) = erf(3 / sqrt 2)`.
fn mass_pm3() -> f64 {
    erf_series(3.0 / std::f64::consts::SQRT_2)
}

fn truncated_variance() -> f64 {
    1.0 - 6.0 * phi(3.0) / mass_pm3()
}

#[test]
fn erf_series_sanity() {
    // erf(1) to 16 digits
    assert!((erf_series(1.0) - 0.842_700_792_949_714_9).abs() < 1e-15);
}

#[test]
fn density_at_zero_matches_series_oracle() {
    let want = phi(0.0) / mass_pm3();
    let got = truncated_normal_density(0.0, -3.0, 3.0).unwrap();
    assert!((got - want).abs() < 1e-13, "{got} vs {want}");
    assert!((want - 0.400_022).abs() < 5e-7);
}

#[test]
fn density_integrates_to_one() {
    for (lo, hi) in [(-3.0, 3.0), (-1.0, 2.5), (0.5, 4.0)] {
        let v = integrate(|y| truncated_normal_density(y, lo, hi).unwrap(), lo, hi, QuadConfig::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-8, "[{lo},{hi}] -> {v}");
    }
}

#[test]
fn true_risk_is_truncated_variance_plus_shift() {
    let model = TrueModel::truncated_std_normal(-3.0, 3.0).unwrap();
    let loss = LossSpec::squared(Interval::new(-1.0, 1.0).unwrap());
    let var = truncated_variance();
    assert!((var - 0.973_337).abs() < 5e-7);
    let r0 = true_risk(&loss, &model, 0.0).unwrap();
    assert!((r0 - var).abs() < 1e-7, "{r0} vs {var}");
    let r1 = true_risk(&loss, &model, 1.0).unwrap();
    assert!((r1 - (var + 1.0)).abs() < 1e-7);
    for t in [-0.75, -0.2, 0.4] {
        assert!((true_risk(&loss, &model, t).unwrap() - (var + t * t)).abs() < 1e-7);
    }
}

#[test]
fn absolute_risk_matches_closed_form() {
    // E|Y - t| for Y ~ N(0,1) truncated to [-3, 3]:
    // [ 2 phi(t) - 2 phi(3) + t (2 Phi(t) - 1) ] / mass   (|t| <= 3)
    let model = TrueModel::truncated_std_normal(-3.0, 3.0).unwrap();
    let loss = LossSpec::absolute(Interval::new(-1.0, 1.0).unwrap());
    for t in [0.0f64, 0.3, -0.8] {
        let cdf_t = 0.5 * (1.0 + t.signum() * erf_series(t.abs() / std::f64::consts::SQRT_2));
        let want = (2.0 * phi(t) - 2.0 * phi(3.0) + t * (2.0 * cdf_t - 1.0)) / mass_pm3();
        let got = true_risk(&loss, &model, t).unwrap();
        assert!((got - want).abs() < 1e-8, "t={t}: {got} vs {want}");
    }
}
