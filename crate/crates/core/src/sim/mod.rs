//! Reproducible Monte Carlo: per-replication random streams, truncated
//! normal sampling, replication sweeps with percentile bands and minimiser
//! histograms, and coverage experiments.
//!
//! Replication `r` at sample size `n` always draws from the stream
//! `(master_seed, n, r)`, so results are identical for any worker count.

mod coverage;
mod replication;
mod rng;
mod sampling;
mod stats;

pub use coverage::{coverage_experiment, rank_counts, CoverageResult};
pub use replication::{run_replications, NSummary, ReplicationSummary, SimConfig};
pub use rng::{stream_rng, StreamRng, RNG_ALGORITHM};
pub use sampling::{draw_from_model, sample_model, sample_truncated_normal};
pub use stats::{aggregate_percentiles, histogram, percentile_sorted, Histogram};

use crate::{MfgfError, Result};

/// Runs `f` on a pool with `workers` threads (0 lets rayon choose).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| MfgfError::InvalidConfig(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
