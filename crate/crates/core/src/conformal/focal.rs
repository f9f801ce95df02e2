use rayon::prelude::*;

use super::score::{rank_unchecked, NonconformityScore};
use crate::data_model::{BoundedSample, ThetaGrid};
use crate::{MfgfError, Result};

/// Grid resolution used for non-identity scores when the caller does not
/// pick one.
pub const DEFAULT_Y_GRID_POINTS: usize = 2001;

/// One open interval of a focal set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalComponent {
    pub lo: f64,
    pub hi: f64,
    /// Inclusive range of y-grid indices in this run (grid representation
    /// only).
    pub grid_run: Option<(usize, usize)>,
}

/// A focal set: a finite union of disjoint open intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FocalSet {
    pub components: Vec<FocalComponent>,
}

impl FocalSet {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    /// Closed-form gaps between consecutive order statistics.
    ExactIntervals,
    /// Level sets of the rank evaluated on a y-grid.
    GridLevelSets { grid: ThetaGrid, ranks: Vec<usize> },
}

/// The n + 1 focal sets of a sample, each carrying mass `1/(n+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalSystem {
    n: usize,
    lo: f64,
    hi: f64,
    sets: Vec<FocalSet>,
    representation: Representation,
}

/// Builds the focal system of `sample` under `score`.
///
/// The identity score has the closed form `A(v) = (Y_(v-1), Y_(v))` with the
/// support endpoints adjoined. Any other score is evaluated on `grid`, which
/// must span the support exactly; each maximal run of equal rank is widened
/// by half a grid step on both sides so the runs tile the support.
pub fn focal_sets(sample: &BoundedSample, score: &NonconformityScore, grid: Option<&ThetaGrid>) -> Result<FocalSystem> {
    if score.is_identity() {
        return Ok(FocalSystem::identity(sample));
    }
    let grid = grid.ok_or(MfgfError::MissingGrid)?;
    FocalSystem::from_grid(sample, score, grid)
}

impl FocalSystem {
    fn identity(sample: &BoundedSample) -> Self {
        let n = sample.n();
        let sets = (1..=n + 1)
            .map(|v| FocalSet {
                components: vec![FocalComponent {
                    lo: sample.order_stat(v - 1),
                    hi: sample.order_stat(v),
                    grid_run: None,
                }],
            })
            .collect();
        Self {
            n,
            lo: sample.support_lo(),
            hi: sample.support_hi(),
            sets,
            representation: Representation::ExactIntervals,
        }
    }

    fn from_grid(sample: &BoundedSample, score: &NonconformityScore, grid: &ThetaGrid) -> Result<Self> {
        let (lo, hi) = (sample.support_lo(), sample.support_hi());
        if grid.lo() != lo || grid.hi() != hi || grid.count() < 2 {
            return Err(MfgfError::InvalidGrid(format!(
                "y-grid must span the support [{lo}, {hi}] with at least two points"
            )));
        }
        let pts = grid.points();
        let ranks: Vec<usize> = pts.par_iter().map(|&y| rank_unchecked(sample, y, score)).collect();
        let n = sample.n();
        let half = 0.5 * grid.step();
        let mut sets = vec![FocalSet::default(); n + 1];
        let mut start = 0;
        for i in 1..=pts.len() {
            if i == pts.len() || ranks[i] != ranks[start] {
                let end = i - 1;
                let c_lo = if start == 0 { lo } else { pts[start] - half };
                let c_hi = if end == pts.len() - 1 { hi } else { pts[end] + half };
                sets[ranks[start] - 1].components.push(FocalComponent {
                    lo: c_lo,
                    hi: c_hi,
                    grid_run: Some((start, end)),
                });
                start = i;
            }
        }
        Ok(Self { n, lo, hi, sets, representation: Representation::GridLevelSets { grid: grid.clone(), ranks } })
    }

    /// Default 2001-point y-grid over the support of `sample`.
    pub fn default_grid(sample: &BoundedSample) -> Result<ThetaGrid> {
        ThetaGrid::new(sample.support_lo(), sample.support_hi(), DEFAULT_Y_GRID_POINTS)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Focal sets in index order; `sets()[v - 1]` is `A(v)`.
    pub fn sets(&self) -> &[FocalSet] {
        &self.sets
    }

    pub fn set(&self, v: usize) -> Result<&FocalSet> {
        if v == 0 || v > self.n + 1 {
            return Err(MfgfError::IndexOutOfRange { index: v, max: self.n + 1 });
        }
        Ok(&self.sets[v - 1])
    }

    pub fn representation(&self) -> &Representation {
        &self.representation
    }

    pub fn mass_each(&self) -> f64 {
        1.0 / (self.n + 1) as f64
    }

    /// Indices of focal sets that no grid point reached. Always empty for
    /// the exact representation.
    pub fn empty_sets(&self) -> Vec<usize> {
        match self.representation {
            Representation::ExactIntervals => Vec::new(),
            Representation::GridLevelSets { .. } => (1..=self.n + 1).filter(|&v| self.sets[v - 1].is_empty()).collect(),
        }
    }

    /// Fails with `EmptyFocalSet` naming the first unattained rank.
    pub fn require_nonempty(&self) -> Result<()> {
        match self.empty_sets().first() {
            Some(&v) => Err(MfgfError::EmptyFocalSet { v }),
            None => Ok(()),
        }
    }

    /// Index of the focal set containing `y`. A point on the boundary between
    /// two sets is assigned to the lower index.
    pub fn focal_index(&self, y: f64) -> Result<usize> {
        if !(self.lo <= y && y <= self.hi) {
            return Err(MfgfError::OutOfSupport { value: y, lo: self.lo, hi: self.hi });
        }
        Ok(match &self.representation {
            Representation::ExactIntervals => {
                // sets[v-1].hi is Y_(v); first v with y <= Y_(v)
                1 + self.sets[..self.n].partition_point(|s| s.components[0].hi < y)
            }
            Representation::GridLevelSets { grid, ranks } => {
                let step = grid.step();
                let pos = ((y - self.lo) / step).round() as usize;
                ranks[pos.min(ranks.len() - 1)]
            }
        })
    }

    /// Whether `y` lies in the union of the first `k` focal sets.
    pub fn in_prediction_set(&self, y: f64, k: usize) -> Result<bool> {
        Ok(self.focal_index(y)? <= k)
    }

    /// Contour (GF transducer) value at `y`: the fraction of nested
    /// prediction sets `Omega(1) ⊂ ... ⊂ Omega(n+1)` that contain `y`,
    /// i.e. `(n + 2 - v) / (n + 1)` for `y` in focal set `v`.
    pub fn contour(&self, y: f64) -> Result<f64> {
        let v = self.focal_index(y)?;
        Ok((self.n + 2 - v) as f64 / (self.n + 1) as f64)
    }
}
