//! Rank-pivot predictive inference.
//!
//! For a candidate value `y` the n observations plus `y` are scored with a
//! symmetric nonconformity measure; the rank of `y`'s score among the n + 1
//! scores is uniform on `1..=n+1` when `y` is a fresh exchangeable draw.
//! Inverting the pivot gives n + 1 focal sets `A(v) = { y : rank(y) = v }`,
//! each carrying mass `1/(n+1)`. The union of the first `k` focal sets is a
//! prediction set with exact marginal coverage `k/(n+1)`.

mod focal;
mod prediction;
mod score;

pub use focal::{focal_sets, FocalComponent, FocalSet, FocalSystem, Representation, DEFAULT_Y_GRID_POINTS};
pub use prediction::{coverage_probability, k_for_alpha, prediction_set, PredictionSet};
pub use score::{rank_candidate, CustomScore, NonconformityScore};
