use rayon::prelude::*;

use super::rng::stream_rng;
use super::sampling::sample_model;
use super::stats::{aggregate_percentiles, histogram, Histogram};
use super::with_workers;
use crate::data_model::{LossSpec, ThetaGrid, TrueModel};
use crate::risk::{closed_form_unchecked, empirical_risk_unchecked, minimize_upper_risk, CurveKind, RiskCurve};
use crate::{MfgfError, Result};

/// Design of a replication study.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub model: TrueModel,
    pub loss: LossSpec,
    pub n_values: Vec<usize>,
    pub replications: usize,
    pub theta_grid: ThetaGrid,
    /// Band probabilities; the first and last give the band edges.
    pub percentiles: Vec<f64>,
    pub histogram_bins: usize,
    pub master_seed: u64,
}

impl SimConfig {
    /// The illustration setting: truncated standard normal on `[-3, 3]`,
    /// squared loss, `n` in {20, 200}, 1000 replications, 5th/95th
    /// percentile band and 30 histogram bins.
    pub fn illustration(master_seed: u64) -> Result<Self> {
        let theta_grid = ThetaGrid::new(-2.0, 2.0, 401)?;
        Ok(Self {
            model: TrueModel::truncated_std_normal(-3.0, 3.0)?,
            loss: LossSpec::squared(crate::data_model::Interval::new(-3.0, 3.0)?),
            n_values: vec![20, 200],
            replications: 1000,
            theta_grid,
            percentiles: vec![0.05, 0.95],
            histogram_bins: 30,
            master_seed,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(MfgfError::InvalidConfig(msg.into()));
        if self.replications == 0 {
            return bad("replications must be at least 1");
        }
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return bad("n values must be nonempty and positive");
        }
        if self.n_values.iter().any(|&n| n as u64 > u32::MAX as u64) || self.replications as u64 > u32::MAX as u64 {
            return bad("n and replications must fit in 32 bits");
        }
        if self.percentiles.is_empty()
            || self.percentiles.iter().any(|&p| !(p > 0.0 && p < 1.0))
            || self.percentiles.windows(2).any(|w| w[0] > w[1])
        {
            return bad("percentiles must be sorted and inside (0, 1)");
        }
        if self.histogram_bins == 0 {
            return bad("histogram needs at least one bin");
        }
        if !self.loss.convex_in_y() {
            return Err(MfgfError::NonConvexLoss);
        }
        for theta in [self.theta_grid.lo(), self.theta_grid.hi()] {
            self.loss.check_theta(theta)?;
        }
        Ok(())
    }
}

/// Aggregates for one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct NSummary {
    pub n: usize,
    pub median: RiskCurve,
    pub band_lo: RiskCurve,
    pub band_hi: RiskCurve,
    /// Pointwise median of the empirical-risk curves.
    pub median_empirical: RiskCurve,
    /// Refined upper-risk minimiser of each replication, in replication order.
    pub minimizers: Vec<f64>,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationSummary {
    pub per_n: Vec<NSummary>,
}

impl ReplicationSummary {
    pub fn for_n(&self, n: usize) -> Option<&NSummary> {
        self.per_n.iter().find(|s| s.n == n)
    }
}

struct Replicate {
    upper: Vec<f64>,
    empirical: Vec<f64>,
    minimizer: f64,
}

/// Runs the study on `workers` threads (0 lets rayon choose). The output
/// is the same for every worker count.
pub fn run_replications(config: &SimConfig, workers: usize) -> Result<ReplicationSummary> {
    config.validate()?;
    with_workers(workers, || config.n_values.iter().map(|&n| summarise_n(config, n)).collect::<Result<Vec<_>>>())?
        .map(|per_n| ReplicationSummary { per_n })
}

fn summarise_n(config: &SimConfig, n: usize) -> Result<NSummary> {
    let grid = &config.theta_grid;
    let reps: Vec<Replicate> = (0..config.replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(config.master_seed, n as u64, r as u64);
            let sample = sample_model(&config.model, n, &mut rng)?;
            let mut upper = Vec::with_capacity(grid.count());
            let mut empirical = Vec::with_capacity(grid.count());
            for &theta in grid.points() {
                upper.push(closed_form_unchecked(&config.loss, &sample, theta).total);
                empirical.push(empirical_risk_unchecked(&config.loss, &sample, theta));
            }
            let minimizer = minimize_upper_risk(&config.loss, &sample, grid)?.theta;
            Ok(Replicate { upper, empirical, minimizer })
        })
        .collect::<Result<Vec<_>>>()?;

    let to_curves = |pick: fn(&Replicate) -> &Vec<f64>, kind| -> Vec<RiskCurve> {
        reps.iter().map(|r| RiskCurve::new(grid.clone(), pick(r).clone(), kind)).collect()
    };
    let upper = to_curves(|r| &r.upper, CurveKind::Upper);
    let empirical = to_curves(|r| &r.empirical, CurveKind::Empirical);

    let mut probs = vec![0.5];
    probs.extend_from_slice(&config.percentiles);
    let mut agg = aggregate_percentiles(&upper, &probs)?.into_iter();
    let median = agg.next().expect("median");
    let bands: Vec<RiskCurve> = agg.collect();
    let band_lo = bands[0].clone();
    let band_hi = bands[bands.len() - 1].clone();
    let median_empirical = aggregate_percentiles(&empirical, &[0.5])?.remove(0);

    let minimizers: Vec<f64> = reps.iter().map(|r| r.minimizer).collect();
    let histogram = histogram(&minimizers, config.histogram_bins, None)?;
    Ok(NSummary { n, median, band_lo, band_hi, median_empirical, minimizers, histogram })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(reps: usize) -> SimConfig {
        let mut c = SimConfig::illustration(42).unwrap();
        c.replications = reps;
        c.n_values = vec![10, 40];
        c.theta_grid = ThetaGrid::new(-1.0, 1.0, 41).unwrap();
        c
    }

    #[test]
    fn single_replication_collapses_bands() {
        let s = run_replications(&small(1), 1).unwrap();
        for ns in &s.per_n {
            assert_eq!(ns.median.values, ns.band_lo.values);
            assert_eq!(ns.median.values, ns.band_hi.values);
            assert_eq!(ns.minimizers.len(), 1);
            assert_eq!(ns.histogram.counts.iter().sum::<usize>(), 1);
        }
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let a = run_replications(&small(30), 1).unwrap();
        let b = run_replications(&small(30), 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bands_ordered_and_upper_dominates_scaled_empirical() {
        let s = run_replications(&small(50), 0).unwrap();
        for ns in &s.per_n {
            let scale = ns.n as f64 / (ns.n + 1) as f64;
            for i in 0..ns.median.values.len() {
                assert!(ns.band_lo.values[i] <= ns.median.values[i]);
                assert!(ns.median.values[i] <= ns.band_hi.values[i]);
                assert!(ns.median.values[i] >= scale * ns.median_empirical.values[i]);
            }
            assert_eq!(ns.minimizers.len(), 50);
        }
    }

    #[test]
    fn invalid_configs() {
        let mut c = small(5);
        c.replications = 0;
        assert!(run_replications(&c, 1).is_err());
        let mut c = small(5);
        c.percentiles = vec![0.9, 0.1];
        assert!(run_replications(&c, 1).is_err());
        let mut c = small(5);
        c.theta_grid = ThetaGrid::new(-5.0, 5.0, 11).unwrap();
        assert!(matches!(run_replications(&c, 1), Err(MfgfError::ThetaOutOfDomain { .. })));
    }
}
