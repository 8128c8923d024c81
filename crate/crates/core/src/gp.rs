//! Exact Gaussian process regression on standardized targets.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{BoapError, Result};
use crate::kernel::Kernel;
use crate::linalg::{jittered_cholesky, log_det, solve_lower, solve_lower_mat};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub mean: f64,
    pub variance: f64,
}

impl Prediction {
    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }
}

pub fn gram<K: Kernel>(kernel: &K, points: &[K::Point]) -> DMatrix<f64> {
    let n = points.len();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        k[(i, i)] = kernel.diag(&points[i]);
        for j in 0..i {
            let v = kernel.eval(&points[i], &points[j]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k
}

pub fn cross<K: Kernel>(kernel: &K, train: &[K::Point], query: &[K::Point]) -> DMatrix<f64> {
    DMatrix::from_fn(train.len(), query.len(), |i, j| kernel.eval(&train[i], &query[j]))
}

/// Posterior of a zero-mean GP conditioned on noisy observations.
#[derive(Debug, Clone)]
pub struct GpPosterior<K: Kernel> {
    kernel: K,
    inputs: Vec<K::Point>,
    targets: DVector<f64>,
    noise_variance: f64,
    chol: Cholesky<f64, Dyn>,
    weights: DVector<f64>,
    jitter: f64,
}

impl<K: Kernel> GpPosterior<K>
where
    K::Point: Clone,
{
    pub fn fit(kernel: K, inputs: Vec<K::Point>, targets: Vec<f64>, noise_variance: f64) -> Result<Self> {
        if inputs.is_empty() {
            return Err(BoapError::InvalidArgument(
                "GP fit needs at least one observation".into(),
            ));
        }
        if inputs.len() != targets.len() {
            return Err(BoapError::DimensionMismatch {
                expected: inputs.len(),
                got: targets.len(),
            });
        }
        if !(noise_variance > 0.0) {
            return Err(BoapError::InvalidArgument("noise variance must be positive".into()));
        }
        let mut cov = gram(&kernel, &inputs);
        for i in 0..inputs.len() {
            cov[(i, i)] += noise_variance;
        }
        let (chol, jitter) = jittered_cholesky(&cov)?;
        let targets = DVector::from_vec(targets);
        let weights = chol.solve(&targets);
        Ok(Self {
            kernel,
            inputs,
            targets,
            noise_variance,
            chol,
            weights,
            jitter,
        })
    }

    pub fn kernel(&self) -> &K {
        &self.kernel
    }

    pub fn inputs(&self) -> &[K::Point] {
        &self.inputs
    }

    pub fn targets(&self) -> &DVector<f64> {
        &self.targets
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn predict(&self, x: &K::Point) -> Prediction {
        let k = DVector::from_iterator(self.inputs.len(), self.inputs.iter().map(|xi| self.kernel.eval(xi, x)));
        let mean = k.dot(&self.weights);
        let v = solve_lower(&self.chol, &k);
        let variance = (self.kernel.diag(x) - v.norm_squared()).max(0.0);
        Prediction { mean, variance }
    }

    /// Joint posterior mean and covariance over a set of query points.
    pub fn predict_joint(&self, query: &[K::Point]) -> (DVector<f64>, DMatrix<f64>) {
        let kq = cross(&self.kernel, &self.inputs, query);
        let mean = kq.transpose() * &self.weights;
        let v = solve_lower_mat(&self.chol, &kq);
        let mut cov = gram(&self.kernel, query) - v.transpose() * v;
        let n = query.len();
        for i in 0..n {
            for j in 0..i {
                let s = 0.5 * (cov[(i, j)] + cov[(j, i)]);
                cov[(i, j)] = s;
                cov[(j, i)] = s;
            }
            if cov[(i, i)] < 0.0 {
                cov[(i, i)] = 0.0;
            }
        }
        (mean, cov)
    }

    /// −½ yᵀ(K+σ²I)⁻¹y − ½ log|K+σ²I| − (n/2) log 2π
    pub fn log_marginal_likelihood(&self) -> f64 {
        let n = self.targets.len() as f64;
        -0.5 * self.targets.dot(&self.weights) - 0.5 * log_det(&self.chol) - 0.5 * n * LN_2PI
    }

    /// Σ log N(y | μ(x), σ²(x) + σ_η²) over a held-out set.
    pub fn predictive_log_likelihood(&self, holdout: &[(K::Point, f64)]) -> Result<f64> {
        if holdout.is_empty() {
            return Err(BoapError::EmptyHoldout);
        }
        Ok(holdout
            .iter()
            .map(|(x, y)| {
                let p = self.predict(x);
                let var = p.variance + self.noise_variance;
                let r = y - p.mean;
                -0.5 * (LN_2PI + var.ln() + r * r / var)
            })
            .sum())
    }
}

/// Affine map to zero mean and unit variance. A constant sample maps with
/// unit scale so that it stays finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: f64,
    pub scale: f64,
}

impl Standardizer {
    pub fn fit(values: &[f64]) -> Self {
        let n = values.len().max(1) as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let scale = if var > 0.0 && var.is_finite() { var.sqrt() } else { 1.0 };
        Self { mean, scale }
    }

    pub fn apply(&self, v: f64) -> f64 {
        (v - self.mean) / self.scale
    }

    pub fn apply_all(&self, values: &[f64]) -> Vec<f64> {
        values.iter().map(|v| self.apply(*v)).collect()
    }

    pub fn invert(&self, z: f64) -> f64 {
        z * self.scale + self.mean
    }
}
