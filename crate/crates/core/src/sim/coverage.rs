use rayon::prelude::*;

use super::rng::stream_rng;
use super::sampling::{draw_from_model, sample_model};
use crate::conformal::{focal_sets, k_for_alpha, rank_candidate, FocalSystem, NonconformityScore};
use crate::data_model::TrueModel;
use crate::{MfgfError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageResult {
    pub n: usize,
    pub alpha: f64,
    pub k: usize,
    pub nominal: f64,
    pub hits: usize,
    pub replications: usize,
    pub empirical: f64,
}

/// Monte Carlo coverage of `Omega(k)`, `k = ceil((1 - alpha)(n + 1))`.
///
/// Each replication draws n + 1 points from `model`, builds the focal sets
/// of the first n (on the default 2001-point grid for non-identity scores)
/// and checks whether the last point lands in the prediction set.
pub fn coverage_experiment(
    model: &TrueModel,
    score: &NonconformityScore,
    n: usize,
    alpha: f64,
    replications: usize,
    seed: u64,
) -> Result<CoverageResult> {
    if n == 0 {
        return Err(MfgfError::EmptySample);
    }
    if replications == 0 {
        return Err(MfgfError::InvalidConfig("replications must be at least 1".into()));
    }
    let k = k_for_alpha(n, alpha)?;
    let hits = (0..replications)
        .into_par_iter()
        .map(|r| -> Result<usize> {
            let mut rng = stream_rng(seed, n as u64, r as u64);
            let sample = sample_model(model, n, &mut rng)?;
            let next = draw_from_model(model, &mut rng);
            let grid = if score.is_identity() { None } else { Some(FocalSystem::default_grid(&sample)?) };
            let focal = focal_sets(&sample, score, grid.as_ref())?;
            Ok(usize::from(focal.in_prediction_set(next, k)?))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(CoverageResult {
        n,
        alpha,
        k,
        nominal: k as f64 / (n + 1) as f64,
        hits,
        replications,
        empirical: hits as f64 / replications as f64,
    })
}

/// Frequencies of the rank pivot: for each of `draws` replications, the
/// rank of a fresh draw against n earlier ones. `counts[v - 1]` counts rank
/// `v`.
pub fn rank_counts(
    model: &TrueModel,
    score: &NonconformityScore,
    n: usize,
    draws: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    let ranks = (0..draws)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, n as u64, r as u64);
            let sample = sample_model(model, n, &mut rng)?;
            let next = draw_from_model(model, &mut rng);
            rank_candidate(&sample, next, score)
        })
        .collect::<Result<Vec<usize>>>()?;
    let mut counts = vec![0; n + 1];
    for v in ranks {
        counts[v - 1] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_support_always_covers() {
        let m = TrueModel::truncated_std_normal(-3.0, 3.0).unwrap();
        let r = coverage_experiment(&m, &NonconformityScore::Identity, 4, 0.01, 500, 9).unwrap();
        assert_eq!(r.k, 5);
        assert_eq!(r.empirical, 1.0);
        assert_eq!(r.nominal, 1.0);
    }

    #[test]
    fn rank_counts_sum_to_draws() {
        let m = TrueModel::truncated_std_normal(-3.0, 3.0).unwrap();
        let c = rank_counts(&m, &NonconformityScore::Identity, 5, 600, 1).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!(c.iter().sum::<usize>(), 600);
    }
}
