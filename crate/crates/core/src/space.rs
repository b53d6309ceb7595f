//! Search spaces and candidate solutions.

use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Axis-aligned box of feasible positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    /// Builds a space from per-dimension bounds. Every dimension must
    /// satisfy `lower[i] < upper[i]` and the bounds must be finite.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::config(format!(
                "bounds must be non-empty and of equal length (got {} and {})",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::config(format!(
                    "dimension {i}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(SearchSpace { lower, upper })
    }

    /// Symmetric box `[-half_width, half_width]^dims`.
    pub fn symmetric(half_width: f64, dims: usize) -> Result<Self> {
        SearchSpace::new(alloc::vec![-half_width; dims], alloc::vec![half_width; dims])
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Width `upper[i] - lower[i]` of one dimension.
    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dims()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    /// Projects `x` onto the box, coordinate by coordinate. Idempotent;
    /// this is the boundary handling used by every algorithm here.
    pub fn clamp(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dims());
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }

    /// Uniform draw from the box.
    pub fn random_position(&self, rng: &mut RngStream) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| rng.uniform_in(*lo, *hi))
            .collect()
    }
}

/// A position together with its objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub position: Vec<f64>,
    pub value: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_bounds() {
        assert!(SearchSpace::new(alloc::vec![], alloc::vec![]).is_err());
        assert!(SearchSpace::new(alloc::vec![0.0], alloc::vec![0.0]).is_err());
        assert!(SearchSpace::new(alloc::vec![1.0], alloc::vec![-1.0]).is_err());
        assert!(SearchSpace::new(alloc::vec![0.0, 0.0], alloc::vec![1.0]).is_err());
        assert!(SearchSpace::new(alloc::vec![f64::NAN], alloc::vec![1.0]).is_err());
    }

    #[test]
    fn clamp_projects_onto_unit_square() {
        let space = SearchSpace::new(alloc::vec![0.0, 0.0], alloc::vec![1.0, 1.0]).unwrap();
        let mut x = [1.5, -0.2];
        space.clamp(&mut x);
        assert_eq!(x, [1.0, 0.0]);
    }

    #[test]
    fn clamp_is_idempotent() {
        let space = SearchSpace::symmetric(5.0, 3).unwrap();
        let mut rng = RngStream::new(3);
        for _ in 0..1000 {
            let mut x = [
                rng.uniform_in(-20.0, 20.0),
                rng.uniform_in(-20.0, 20.0),
                rng.uniform_in(-20.0, 20.0),
            ];
            space.clamp(&mut x);
            let once = x;
            space.clamp(&mut x);
            assert_eq!(x, once);
            assert!(space.contains(&x));
        }
    }

    #[test]
    fn random_positions_stay_in_bounds() {
        let space = SearchSpace::new(alloc::vec![-50.0, 0.0], alloc::vec![50.0, 0.125]).unwrap();
        let mut rng = RngStream::new(11);
        for _ in 0..1_000_000 {
            assert!(space.contains(&space.random_position(&mut rng)));
        }
    }
}
