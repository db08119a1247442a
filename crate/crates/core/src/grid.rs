//! Uniform sampling grids.

use serde::Serialize;

use crate::error::{Error, Result};

/// A closed, uniformly spaced interval `[min, max]` with `points` samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl LinearGrid {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() || max <= min {
            return Err(Error::Grid(format!(
                "grid bounds must be finite with max > min, got [{min}, {max}]"
            )));
        }
        if points < 2 {
            return Err(Error::Grid(format!("grid needs at least 2 points, got {points}")));
        }
        Ok(Self { min, max, points })
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }

    /// Materialize the grid; strictly increasing, endpoints exact.
    pub fn values(&self) -> Vec<f64> {
        let h = self.step();
        let mut v: Vec<f64> = (0..self.points).map(|i| self.min + h * i as f64).collect();
        *v.last_mut().unwrap() = self.max;
        v
    }
}

/// Trapezoid integral of uniformly or nonuniformly sampled data.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let mut acc = 0.0;
    for i in 1..x.len() {
        acc += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_exact() {
        let g = LinearGrid::new(2.0, 3.4, 14001).unwrap();
        let v = g.values();
        assert_eq!(v.len(), 14001);
        assert_eq!(v[0], 2.0);
        assert_eq!(*v.last().unwrap(), 3.4);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(LinearGrid::new(1.0, 1.0, 10).is_err());
        assert!(LinearGrid::new(2.0, 1.0, 10).is_err());
        assert!(LinearGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn trapezoid_linear_exact() {
        let x: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        let y: Vec<f64> = x.iter().map(|&t| 3.0 * t + 1.0).collect();
        assert!((trapezoid(&x, &y) - 2.5).abs() < 1e-14);
    }
}
