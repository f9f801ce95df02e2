use std::fmt;
use std::sync::Arc;

use crate::data_model::BoundedSample;
use crate::Result;

type ScoreFn = dyn Fn(usize, &[f64]) -> f64 + Send + Sync;

/// User-supplied nonconformity measure.
///
/// `f(i, augmented)` scores element `i` of the n + 1 augmented values against
/// the other n. It must not depend on the order of those n values.
#[derive(Clone)]
pub struct CustomScore {
    name: String,
    f: Arc<ScoreFn>,
}

impl CustomScore {
    pub fn new(name: impl Into<String>, f: impl Fn(usize, &[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), f: Arc::new(f) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomScore").field("name", &self.name).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum NonconformityScore {
    /// The value itself.
    Identity,
    /// `|y_i - mean(others)|`, the distance to the leave-one-out mean.
    DistanceToLooMean,
    Custom(CustomScore),
}

impl NonconformityScore {
    pub fn name(&self) -> &str {
        match self {
            Self::Identity => "identity",
            Self::DistanceToLooMean => "loo-mean",
            Self::Custom(c) => c.name(),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Self::Identity)
    }

    /// Score of `augmented[i]` against the remaining values.
    pub fn eval(&self, i: usize, augmented: &[f64]) -> f64 {
        match self {
            Self::Identity => augmented[i],
            Self::DistanceToLooMean => {
                let others = (augmented.len() - 1) as f64;
                let sum: f64 = augmented.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).sum();
                (augmented[i] - sum / others).abs()
            }
            Self::Custom(c) => (c.f)(i, augmented),
        }
    }
}

/// Rank of the candidate's score among the n + 1 scores of the sample
/// augmented with `y`, in `1..=n+1`.
///
/// Ties count against the candidate: it ranks above every data score equal
/// to its own, so the rank is one plus the number of data scores `<=` the
/// candidate score.
pub fn rank_candidate(sample: &BoundedSample, y: f64, score: &NonconformityScore) -> Result<usize> {
    sample.check_in_support(y)?;
    Ok(rank_unchecked(sample, y, score))
}

pub(crate) fn rank_unchecked(sample: &BoundedSample, y: f64, score: &NonconformityScore) -> usize {
    let data = sample.values();
    match score {
        NonconformityScore::Identity => 1 + data.partition_point(|&v| v <= y),
        NonconformityScore::DistanceToLooMean => {
            let n = data.len() as f64;
            let total: f64 = data.iter().sum::<f64>() + y;
            let cand = (y - (total - y) / n).abs();
            1 + data.iter().filter(|&&v| (v - (total - v) / n).abs() <= cand).count()
        }
        NonconformityScore::Custom(_) => {
            let mut aug = Vec::with_capacity(data.len() + 1);
            aug.extend_from_slice(data);
            aug.push(y);
            let cand = score.eval(data.len(), &aug);
            1 + (0..data.len()).filter(|&i| score.eval(i, &aug) <= cand).count()
        }
    }
}
