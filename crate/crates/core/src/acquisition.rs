//! Acquisition over a finite candidate set: Thompson sampling, Expected
//! Improvement and the GP-UCB exploration schedule.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{BoapError, Result};
use crate::gp::GpPosterior;
use crate::kernel::Kernel;
use crate::linalg::jittered_cholesky;
use crate::normal;
use crate::rng::stream;

const PRIMES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Posterior variances at or below this are treated as exactly zero.
const ZERO_VARIANCE: f64 = 1e-12;

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base as u64) as f64 * inv;
        i /= base as u64;
        inv /= b;
    }
    out
}

/// Candidate designs on the unit cube.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateGrid {
    pub points: Vec<Vec<f64>>,
    pub seed: u64,
}

impl CandidateGrid {
    /// Halton points with a seeded Cranley–Patterson rotation.
    pub fn halton(dim: usize, size: usize, seed: u64) -> Result<Self> {
        if size == 0 {
            return Err(BoapError::InvalidArgument("candidate grid must be non-empty".into()));
        }
        if dim == 0 || dim > PRIMES.len() {
            return Err(BoapError::InvalidArgument(format!(
                "candidate grid supports 1..={} dimensions, got {dim}",
                PRIMES.len()
            )));
        }
        let mut rng = stream(seed, "grid-shift", 0);
        let shift: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
        let points = (0..size as u64)
            .map(|i| {
                (0..dim)
                    .map(|d| {
                        let v = radical_inverse(i + 1, PRIMES[d]) + shift[d];
                        v - v.floor()
                    })
                    .collect()
            })
            .collect();
        Ok(Self { points, seed })
    }

    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(BoapError::InvalidArgument("candidate grid must be non-empty".into()));
        }
        Ok(Self { points, seed: 0 })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThompsonSample {
    pub values: Vec<f64>,
    pub argmax_idx: usize,
}

/// Index of the maximum, lowest index on ties. NaN never wins.
pub fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] || values[best].is_nan() {
            best = i;
        }
    }
    best
}

/// Draws one joint posterior sample over `query` and returns its argmax.
///
/// Points whose posterior variance is numerically zero take their mean
/// exactly; the rest are sampled through a jittered Cholesky factor.
pub fn thompson_sample_points<K, R>(
    posterior: &GpPosterior<K>,
    query: &[K::Point],
    rng: &mut R,
) -> Result<ThompsonSample>
where
    K: Kernel,
    K::Point: Clone,
    R: Rng + ?Sized,
{
    if query.is_empty() {
        return Err(BoapError::InvalidArgument(
            "Thompson sampling over an empty candidate set".into(),
        ));
    }
    let (mean, cov) = posterior.predict_joint(query);
    let active: Vec<usize> = (0..query.len()).filter(|&i| cov[(i, i)] > ZERO_VARIANCE).collect();
    let mut values: Vec<f64> = mean.iter().copied().collect();
    if !active.is_empty() {
        let sub = cov.select_rows(&active).select_columns(&active);
        let (chol, _) = jittered_cholesky(&sub)?;
        let z = DVector::from_iterator(
            active.len(),
            (0..active.len()).map(|_| rng.sample::<f64, _>(StandardNormal)),
        );
        let draw = chol.l_dirty().lower_triangle() * z;
        for (k, &i) in active.iter().enumerate() {
            values[i] += draw[k];
        }
    }
    let argmax_idx = argmax_lowest(&values);
    Ok(ThompsonSample { values, argmax_idx })
}

pub fn thompson_sample<K, R>(posterior: &GpPosterior<K>, grid: &[K::Point], rng: &mut R) -> Result<ThompsonSample>
where
    K: Kernel,
    K::Point: Clone,
    R: Rng + ?Sized,
{
    thompson_sample_points(posterior, grid, rng)
}

/// (μ − best)Φ(Z) + σφ(Z) with Z = (μ − best)/σ; zero when σ = 0.
pub fn expected_improvement_value(mean: f64, sd: f64, best_y: f64) -> f64 {
    if !(sd > 0.0) {
        return 0.0;
    }
    let diff = mean - best_y;
    let z = diff / sd;
    (diff * normal::cdf(z) + sd * normal::pdf(z)).max(0.0)
}

pub fn expected_improvement<K>(posterior: &GpPosterior<K>, x: &K::Point, best_y: f64) -> f64
where
    K: Kernel,
    K::Point: Clone,
{
    let p = posterior.predict(x);
    expected_improvement_value(p.mean, p.sd(), best_y)
}

/// β_t = 2 log(t^{d/2+2} π² / (3δ'))
pub fn ucb_beta(t: usize, d: usize, delta_prime: f64) -> Result<f64> {
    if t == 0 {
        return Err(BoapError::InvalidArgument("UCB iteration index starts at 1".into()));
    }
    if !(delta_prime > 0.0 && delta_prime < 1.0) {
        return Err(BoapError::InvalidArgument(format!(
            "delta' must lie in (0,1), got {delta_prime}"
        )));
    }
    let exponent = d as f64 / 2.0 + 2.0;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    Ok(2.0 * (exponent * (t as f64).ln() + (pi2 / (3.0 * delta_prime)).ln()))
}

pub fn ucb_value(mean: f64, sd: f64, beta: f64) -> f64 {
    mean + beta.sqrt() * sd
}
