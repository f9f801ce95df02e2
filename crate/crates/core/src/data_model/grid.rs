use crate::{MfgfError, Result};

/// Equally spaced points on `[lo, hi]`, endpoints included.
///
/// A single-point grid requires `lo == hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaGrid {
    lo: f64,
    hi: f64,
    points: Vec<f64>,
}

impl ThetaGrid {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(MfgfError::InvalidGrid("endpoints must be finite".into()));
        }
        match count {
            0 => Err(MfgfError::InvalidGrid("count must be positive".into())),
            1 if lo == hi => Ok(Self { lo, hi, points: vec![lo] }),
            1 => Err(MfgfError::InvalidGrid("a one-point grid needs lo == hi".into())),
            _ if lo >= hi => Err(MfgfError::InvalidGrid(format!("need lo < hi, got [{lo}, {hi}]"))),
            _ => {
                let step = (hi - lo) / (count - 1) as f64;
                let mut points: Vec<f64> = (0..count).map(|i| lo + step * i as f64).collect();
                points[count - 1] = hi;
                Ok(Self { lo, hi, points })
            }
        }
    }

    /// One-point grid at `theta`.
    pub fn single(theta: f64) -> Result<Self> {
        Self::new(theta, theta, 1)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Spacing between neighbouring points (zero for a one-point grid).
    pub fn step(&self) -> f64 {
        if self.count() < 2 {
            0.0
        } else {
            (self.hi - self.lo) / (self.count() - 1) as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_exact() {
        let g = ThetaGrid::new(-1.0, 1.0, 41).unwrap();
        assert_eq!(g.points()[0], -1.0);
        assert_eq!(g.points()[40], 1.0);
        assert_eq!(g.points()[20], 0.0);
        assert!(g.points().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_point() {
        let g = ThetaGrid::single(0.25).unwrap();
        assert_eq!(g.points(), &[0.25]);
        assert_eq!(g.step(), 0.0);
        assert!(ThetaGrid::new(0.0, 1.0, 1).is_err());
        assert!(ThetaGrid::new(0.0, 1.0, 0).is_err());
        assert!(ThetaGrid::new(1.0, 0.0, 5).is_err());
    }
}
