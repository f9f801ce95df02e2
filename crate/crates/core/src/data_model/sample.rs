use crate::{MfgfError, Result};

/// Observations from a distribution with known bounded support `[lo, hi]`.
///
/// Values are kept sorted ascending. `original_order[j]` is the position in
/// the caller's input of the `j`-th smallest value, so the input is
/// recoverable with [`BoundedSample::to_input_order`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedSample {
    values: Vec<f64>,
    lo: f64,
    hi: f64,
    original_order: Vec<usize>,
}

impl BoundedSample {
    pub fn new(raw: &[f64], lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(MfgfError::DegenerateSupport { lo, hi });
        }
        if raw.is_empty() {
            return Err(MfgfError::EmptySample);
        }
        if let Some(&value) = raw.iter().find(|&&v| !(lo <= v && v <= hi)) {
            return Err(MfgfError::OutOfSupport { value, lo, hi });
        }
        let mut order: Vec<usize> = (0..raw.len()).collect();
        // stable, so ties keep their input order
        order.sort_by(|&i, &j| raw[i].total_cmp(&raw[j]));
        let values = order.iter().map(|&i| raw[i]).collect();
        Ok(Self { values, lo, hi, original_order: order })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Sorted observations.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support_lo(&self) -> f64 {
        self.lo
    }

    pub fn support_hi(&self) -> f64 {
        self.hi
    }

    pub fn original_order(&self) -> &[usize] {
        &self.original_order
    }

    /// Order statistic with the support endpoints adjoined: index 0 is the
    /// lower endpoint, `1..=n` the sorted data and `n + 1` the upper endpoint.
    pub fn order_stat(&self, j: usize) -> f64 {
        match j {
            0 => self.lo,
            j if j <= self.n() => self.values[j - 1],
            j if j == self.n() + 1 => self.hi,
            _ => panic!("order statistic index {j} out of range 0..={}", self.n() + 1),
        }
    }

    /// Observations in the order they were supplied.
    pub fn to_input_order(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        for (sorted_idx, &input_idx) in self.original_order.iter().enumerate() {
            out[input_idx] = self.values[sorted_idx];
        }
        out
    }

    pub fn contains(&self, y: f64) -> bool {
        self.lo <= y && y <= self.hi
    }

    pub(crate) fn check_in_support(&self, y: f64) -> Result<()> {
        if self.contains(y) {
            Ok(())
        } else {
            Err(MfgfError::OutOfSupport { value: y, lo: self.lo, hi: self.hi })
        }
    }

    /// A copy with one more observation.
    pub fn with_observation(&self, y: f64) -> Result<Self> {
        let mut raw = self.to_input_order();
        raw.push(y);
        Self::new(&raw, self.lo, self.hi)
    }
}
