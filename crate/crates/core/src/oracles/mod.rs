//! Objective oracles and simulated experts.

mod dataset;
mod synthetic;

pub use dataset::{load_dataset, DatasetOracle, DatasetSchema};
pub use synthetic::{FeatureSet, SyntheticKind, SyntheticObjective};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::rng::stream;
use crate::space::SearchSpace;

/// An optimization problem: the objective to maximize plus the abstract
/// properties an expert can compare designs on.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;

    fn space(&self) -> &SearchSpace;

    /// Exact objective value (no observation noise).
    fn objective(&self, x: &[f64]) -> Result<f64>;

    fn property_labels(&self) -> Vec<String>;

    fn property(&self, idx: usize, x: &[f64]) -> Result<f64>;

    /// Best attainable objective value, when known.
    fn true_max(&self) -> Option<f64>;

    /// Finite candidate designs for discrete problems.
    fn candidate_pool(&self) -> Option<&[Vec<f64>]> {
        None
    }

    /// Variance of the noise added to each evaluation.
    fn evaluation_noise(&self) -> f64;

    fn num_properties(&self) -> usize {
        self.property_labels().len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    First,
    Second,
}

impl Winner {
    pub fn flipped(self) -> Self {
        match self {
            Winner::First => Winner::Second,
            Winner::Second => Winner::First,
        }
    }
}

/// Noise-free orientation: larger property wins, ties fall back to the
/// larger objective, then to the lexicographically smaller design.
pub fn accurate_orientation(problem: &dyn Problem, idx: usize, a: &[f64], b: &[f64]) -> Result<Winner> {
    let (pa, pb) = (problem.property(idx, a)?, problem.property(idx, b)?);
    if pa != pb {
        return Ok(if pa > pb { Winner::First } else { Winner::Second });
    }
    let (fa, fb) = (problem.objective(a)?, problem.objective(b)?);
    if fa != fb {
        return Ok(if fa > fb { Winner::First } else { Winner::Second });
    }
    Ok(match a.partial_cmp(b) {
        Some(std::cmp::Ordering::Greater) => Winner::Second,
        _ => Winner::First,
    })
}

/// Simulated expert answering pairwise property comparisons. Each answer
/// is flipped independently with probability `flip_prob`.
#[derive(Debug, Clone)]
pub struct SimulatedExpert {
    flip_prob: f64,
    rng: ChaCha8Rng,
}

impl SimulatedExpert {
    pub fn accurate(seed: u64) -> Self {
        Self::noisy(0.0, seed)
    }

    pub fn noisy(flip_prob: f64, seed: u64) -> Self {
        Self {
            flip_prob: flip_prob.clamp(0.0, 1.0),
            rng: stream(seed, "expert", 0),
        }
    }

    pub fn flip_prob(&self) -> f64 {
        self.flip_prob
    }

    pub fn compare(&mut self, problem: &dyn Problem, idx: usize, a: &[f64], b: &[f64]) -> Result<Winner> {
        let truth = accurate_orientation(problem, idx, a, b)?;
        // One draw per answer regardless of δ keeps streams aligned.
        let u: f64 = self.rng.gen();
        Ok(if u < self.flip_prob { truth.flipped() } else { truth })
    }
}

/// Additive Gaussian observation noise with its own seeded stream.
#[derive(Debug, Clone)]
pub struct ObservationNoise {
    sd: f64,
    rng: ChaCha8Rng,
}

impl ObservationNoise {
    pub fn new(variance: f64, seed: u64) -> Self {
        Self {
            sd: variance.max(0.0).sqrt(),
            rng: stream(seed, "observation-noise", 0),
        }
    }

    /// Returns `(noisy, exact)`.
    pub fn evaluate(&mut self, problem: &dyn Problem, x: &[f64]) -> Result<(f64, f64)> {
        let exact = problem.objective(x)?;
        let eps: f64 = self.rng.sample(StandardNormal);
        Ok((exact + self.sd * eps, exact))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem() -> SyntheticObjective {
        SyntheticObjective::new(SyntheticKind::Benchmark1d, FeatureSet::Accurate)
    }

    #[test]
    fn inverse_square_feature_prefers_smaller_x() {
        let p = problem();
        let mut expert = SimulatedExpert::accurate(0);
        assert_eq!(expert.compare(&p, 1, &[1.0], &[2.0]).unwrap(), Winner::First);
        assert_eq!(expert.compare(&p, 1, &[2.0], &[1.0]).unwrap(), Winner::Second);
    }

    #[test]
    fn zero_flip_matches_accurate() {
        let p = problem();
        let mut a = SimulatedExpert::accurate(5);
        let mut b = SimulatedExpert::noisy(0.0, 5);
        for i in 0..50 {
            let x = [i as f64 * 0.2];
            let y = [10.0 - i as f64 * 0.15];
            assert_eq!(
                a.compare(&p, i % 2, &x, &y).unwrap(),
                b.compare(&p, i % 2, &x, &y).unwrap()
            );
        }
    }

    #[test]
    fn certain_flip_reverses_everything() {
        let p = problem();
        let mut a = SimulatedExpert::accurate(5);
        let mut b = SimulatedExpert::noisy(1.0, 5);
        for i in 0..50 {
            let x = [i as f64 * 0.2];
            let y = [9.9 - i as f64 * 0.15];
            assert_eq!(
                a.compare(&p, 0, &x, &y).unwrap(),
                b.compare(&p, 0, &x, &y).unwrap().flipped()
            );
        }
    }

    #[test]
    fn ties_fall_back_to_objective_then_lexicographic() {
        // ω₂ = 1/x² ties at ±x, objective breaks the tie.
        let p = SyntheticObjective::new(SyntheticKind::Benchmark1d, FeatureSet::Accurate)
            .with_space(SearchSpace::new(vec![-3.0], vec![3.0]).unwrap());
        let w = accurate_orientation(&p, 1, &[1.0], &[-1.0]).unwrap();
        let (f1, f2) = (p.objective(&[1.0]).unwrap(), p.objective(&[-1.0]).unwrap());
        assert_eq!(w, if f1 > f2 { Winner::First } else { Winner::Second });
        assert_eq!(accurate_orientation(&p, 0, &[0.5], &[0.5]).unwrap(), Winner::First);
    }
}
