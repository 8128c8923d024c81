use serde::{Deserialize, Serialize};

use crate::error::{BoapError, Result};

/// Box-bounded design space. All models work on the unit cube image of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(BoapError::InvalidArgument(
                "search space needs at least one dimension".into(),
            ));
        }
        if lower.len() != upper.len() {
            return Err(BoapError::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(BoapError::InvalidArgument(format!(
                    "bound {i}: lower {lo} must be finite and strictly below upper {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    pub fn normalize(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(v, (lo, hi))| (v - lo) / (hi - lo))
            .collect()
    }

    pub fn denormalize(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(v, (lo, hi))| lo + v * (hi - lo))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_inverted_bounds() {
        assert!(SearchSpace::new(vec![1.0], vec![0.0]).is_err());
        assert!(SearchSpace::new(vec![0.0], vec![0.0]).is_err());
        assert!(SearchSpace::new(vec![0.0, 0.0], vec![1.0]).is_err());
    }

    proptest! {
        #[test]
        fn normalization_round_trips(lo in -50.0f64..50.0, width in 0.01f64..100.0, t in 0.0f64..=1.0) {
            let space = SearchSpace::new(vec![lo], vec![lo + width]).unwrap();
            let x = vec![lo + t * width];
            let u = space.normalize(&x);
            prop_assert!(u[0] >= -1e-12 && u[0] <= 1.0 + 1e-12);
            let back = space.denormalize(&u);
            prop_assert!((back[0] - x[0]).abs() <= 1e-9 * (1.0 + x[0].abs()));
        }
    }
}
