use super::{check_knots, lerp_table};
use crate::{MfgfError, Result};

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(MfgfError::InvalidConfig(format!("invalid interval [{lo}, {hi}]")))
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Loss values on a `theta x y` knot grid, bilinearly interpolated and
/// clamped outside the knots.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedLoss {
    theta_knots: Vec<f64>,
    y_knots: Vec<f64>,
    // row-major: values[i * y_knots.len() + j] = loss(theta_knots[i], y_knots[j])
    values: Vec<f64>,
}

impl TabulatedLoss {
    pub fn new(theta_knots: Vec<f64>, y_knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_knots(&theta_knots, "theta")?;
        check_knots(&y_knots, "y")?;
        if values.len() != theta_knots.len() * y_knots.len() {
            return Err(MfgfError::InvalidGrid(format!(
                "expected {} table entries, got {}",
                theta_knots.len() * y_knots.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(MfgfError::InvalidConfig("tabulated loss values must be finite and >= 0".into()));
        }
        Ok(Self { theta_knots, y_knots, values })
    }

    fn row(&self, i: usize) -> &[f64] {
        let m = self.y_knots.len();
        &self.values[i * m..(i + 1) * m]
    }

    pub fn eval(&self, theta: f64, y: f64) -> f64 {
        let tk = &self.theta_knots;
        let last = tk.len() - 1;
        let (i0, i1, t) = if theta <= tk[0] {
            (0, 0, 0.0)
        } else if theta >= tk[last] {
            (last, last, 0.0)
        } else {
            let hi = tk.partition_point(|&k| k <= theta);
            (hi - 1, hi, (theta - tk[hi - 1]) / (tk[hi] - tk[hi - 1]))
        };
        let a = lerp_table(&self.y_knots, self.row(i0), y);
        if i0 == i1 {
            return a;
        }
        let b = lerp_table(&self.y_knots, self.row(i1), y);
        a + t * (b - a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LossKind {
    /// `(y - theta)^2`
    SquaredError,
    /// `|y - theta|`
    AbsoluteError,
    Tabulated(TabulatedLoss),
}

/// A nonnegative loss `l(theta, y)` on a parameter domain, with the caller's
/// attestation of whether `y -> l(theta, y)` is convex for every `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossSpec {
    kind: LossKind,
    convex_in_y: bool,
    theta_domain: Interval,
}

impl LossSpec {
    pub fn new(kind: LossKind, convex_in_y: bool, theta_domain: Interval) -> Self {
        Self { kind, convex_in_y, theta_domain }
    }

    pub fn squared(theta_domain: Interval) -> Self {
        Self::new(LossKind::SquaredError, true, theta_domain)
    }

    pub fn absolute(theta_domain: Interval) -> Self {
        Self::new(LossKind::AbsoluteError, true, theta_domain)
    }

    /// `l == c` everywhere, stored as a flat two-by-two table.
    pub fn constant(c: f64, theta_domain: Interval) -> Result<Self> {
        let table = TabulatedLoss::new(vec![0.0, 1.0], vec![0.0, 1.0], vec![c; 4])?;
        Ok(Self::new(LossKind::Tabulated(table), true, theta_domain))
    }

    pub fn kind(&self) -> &LossKind {
        &self.kind
    }

    pub fn convex_in_y(&self) -> bool {
        self.convex_in_y
    }

    pub fn theta_domain(&self) -> Interval {
        self.theta_domain
    }

    /// Whether the loss is differentiable in `theta`, which lets optimisers
    /// refine between grid points.
    pub fn smooth_in_theta(&self) -> bool {
        matches!(self.kind, LossKind::SquaredError)
    }

    /// Points of non-smoothness of `y -> l(theta, y)`, used to split
    /// quadrature intervals.
    pub(crate) fn kinks_in_y(&self, theta: f64) -> Vec<f64> {
        match &self.kind {
            LossKind::SquaredError => Vec::new(),
            LossKind::AbsoluteError => vec![theta],
            LossKind::Tabulated(t) => t.y_knots.clone(),
        }
    }

    pub fn eval(&self, theta: f64, y: f64) -> f64 {
        match &self.kind {
            LossKind::SquaredError => (y - theta) * (y - theta),
            LossKind::AbsoluteError => (y - theta).abs(),
            LossKind::Tabulated(t) => t.eval(theta, y),
        }
    }

    pub fn check_theta(&self, theta: f64) -> Result<()> {
        if self.theta_domain.contains(theta) {
            Ok(())
        } else {
            Err(MfgfError::ThetaOutOfDomain { theta, lo: self.theta_domain.lo, hi: self.theta_domain.hi })
        }
    }

    /// Testable consequence of convexity: for `y1 < y2 < y3` the middle value
    /// never exceeds the larger of the outer two.
    pub fn middle_below_max(&self, theta: f64, y1: f64, y2: f64, y3: f64) -> bool {
        let mid = self.eval(theta, y2);
        mid <= self.eval(theta, y1).max(self.eval(theta, y3))
    }
}
