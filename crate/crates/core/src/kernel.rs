//! Covariance functions.
//!
//! [`ArdKernel`] is the squared-exponential kernel with one lengthscale per
//! input dimension. [`SpatialKernel`] is the non-stationary product form
//!
//! ```text
//! k(x, x') = Π_d sqrt(2 l_d(x) l_d(x') / (l_d(x)² + l_d(x')²))
//!            · exp(−Σ_d (x_d − x'_d)² / (l_d(x)² + l_d(x')²))
//! ```
//!
//! used on augmented inputs, where the first `D` dimensions keep constant
//! lengthscales and every augmented dimension `i` uses `alpha · sd_i(x)`.
//! With constant lengthscales the exponent denominator is `2 l²`, so the
//! form collapses exactly onto the ARD kernel with unit signal variance.

use serde::{Deserialize, Serialize};

use crate::error::{BoapError, Result};

/// Default observation noise for the objective GPs.
pub const DEFAULT_NOISE_VARIANCE: f64 = 0.1;
/// Signal variance is pinned because targets are standardized.
pub const DEFAULT_SIGNAL_VARIANCE: f64 = 1.0;
/// Tuning interval for every constant lengthscale on the unit cube.
pub const LENGTHSCALE_BOUNDS: (f64, f64) = (0.1, 1.0);
/// Tuning interval for the augmented-lengthscale scale factor. The upper
/// end is closed at 2; the lower end keeps the search in log space.
pub const ALPHA_BOUNDS: (f64, f64) = (0.01, 2.0);

pub trait Kernel {
    type Point;

    fn eval(&self, a: &Self::Point, b: &Self::Point) -> f64;

    fn diag(&self, a: &Self::Point) -> f64 {
        self.eval(a, a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArdKernelParams {
    pub lengthscales: Vec<f64>,
    pub signal_variance: f64,
    pub noise_variance: f64,
}

impl ArdKernelParams {
    pub fn new(lengthscales: Vec<f64>) -> Self {
        Self {
            lengthscales,
            signal_variance: DEFAULT_SIGNAL_VARIANCE,
            noise_variance: DEFAULT_NOISE_VARIANCE,
        }
    }

    pub fn with_noise(mut self, noise_variance: f64) -> Self {
        self.noise_variance = noise_variance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&l) = self.lengthscales.iter().find(|l| !(**l > 0.0)) {
            return Err(BoapError::NonPositiveLengthscale(l));
        }
        if !(self.signal_variance > 0.0) || !(self.noise_variance > 0.0) {
            return Err(BoapError::InvalidArgument(
                "signal and noise variances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// σ_f² · exp(−½ Σ_d (x_d − x'_d)² / l_d²)
pub fn ard_kernel(x: &[f64], x2: &[f64], params: &ArdKernelParams) -> Result<f64> {
    let dim = params.lengthscales.len();
    for v in [x, x2] {
        if v.len() != dim {
            return Err(BoapError::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
    }
    Ok(ard_unchecked(x, x2, &params.lengthscales, params.signal_variance))
}

fn ard_unchecked(x: &[f64], x2: &[f64], lengthscales: &[f64], signal_variance: f64) -> f64 {
    let r2: f64 = x
        .iter()
        .zip(x2)
        .zip(lengthscales)
        .map(|((a, b), l)| {
            let d = (a - b) / l;
            d * d
        })
        .sum();
    signal_variance * (-0.5 * r2).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArdKernel {
    pub params: ArdKernelParams,
}

impl ArdKernel {
    pub fn new(params: ArdKernelParams) -> Self {
        Self { params }
    }
}

impl Kernel for ArdKernel {
    type Point = Vec<f64>;

    fn eval(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        debug_assert_eq!(a.len(), self.params.lengthscales.len());
        ard_unchecked(a, b, &self.params.lengthscales, self.params.signal_variance)
    }

    fn diag(&self, _a: &Vec<f64>) -> f64 {
        self.params.signal_variance
    }
}

/// Kernel value between two points whose per-dimension lengthscales are
/// already resolved (`lx` at `x`, `lx2` at `x2`).
pub fn spatial_kernel_value(x: &[f64], lx: &[f64], x2: &[f64], lx2: &[f64]) -> Result<f64> {
    let dim = x.len();
    for len in [lx.len(), x2.len(), lx2.len()] {
        if len != dim {
            return Err(BoapError::DimensionMismatch {
                expected: dim,
                got: len,
            });
        }
    }
    if let Some(&l) = lx.iter().chain(lx2).find(|l| !(**l > 0.0)) {
        return Err(BoapError::NonPositiveLengthscale(l));
    }
    Ok(spatial_unchecked(x, lx, x2, lx2))
}

fn spatial_unchecked(x: &[f64], lx: &[f64], x2: &[f64], lx2: &[f64]) -> f64 {
    let mut prefactor = 1.0;
    let mut exponent = 0.0;
    for d in 0..x.len() {
        let (l1, l2) = (lx[d], lx2[d]);
        let denom = l1 * l1 + l2 * l2;
        prefactor *= (2.0 * l1 * l2 / denom).sqrt();
        let diff = x[d] - x2[d];
        exponent += diff * diff / denom;
    }
    prefactor * (-exponent).exp()
}

/// A design augmented with normalized property predictions.
///
/// `feature_sd[i]` is the normalized predictive standard deviation of the
/// i-th property model at `raw`; it drives that dimension's lengthscale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentedPoint {
    pub raw: Vec<f64>,
    pub features: Vec<f64>,
    pub feature_sd: Vec<f64>,
}

impl AugmentedPoint {
    pub fn coords(&self) -> impl Iterator<Item = f64> + '_ {
        self.raw.iter().chain(&self.features).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialKernelParams {
    pub base_lengthscales: Vec<f64>,
    pub alpha: f64,
}

impl SpatialKernelParams {
    /// Full lengthscale vector at a point: constants, then `alpha · sd_i`.
    pub fn lengthscales_at(&self, p: &AugmentedPoint) -> Vec<f64> {
        self.base_lengthscales
            .iter()
            .copied()
            .chain(p.feature_sd.iter().map(|sd| self.alpha * sd))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpatialKernel {
    pub params: SpatialKernelParams,
}

impl SpatialKernel {
    pub fn new(params: SpatialKernelParams) -> Result<Self> {
        if !(params.alpha > 0.0 && params.alpha <= ALPHA_BOUNDS.1) {
            return Err(BoapError::InvalidArgument(format!(
                "alpha must lie in (0, {}], got {}",
                ALPHA_BOUNDS.1, params.alpha
            )));
        }
        if let Some(&l) = params.base_lengthscales.iter().find(|l| !(**l > 0.0)) {
            return Err(BoapError::NonPositiveLengthscale(l));
        }
        Ok(Self { params })
    }

    pub fn eval_checked(&self, a: &AugmentedPoint, b: &AugmentedPoint) -> Result<f64> {
        let xa: Vec<f64> = a.coords().collect();
        let xb: Vec<f64> = b.coords().collect();
        spatial_kernel_value(
            &xa,
            &self.params.lengthscales_at(a),
            &xb,
            &self.params.lengthscales_at(b),
        )
    }
}

impl Kernel for SpatialKernel {
    type Point = AugmentedPoint;

    fn eval(&self, a: &AugmentedPoint, b: &AugmentedPoint) -> f64 {
        let base = &self.params.base_lengthscales;
        let mut prefactor = 1.0;
        let mut exponent = 0.0;
        for (d, l) in base.iter().enumerate() {
            let diff = a.raw[d] - b.raw[d];
            exponent += diff * diff / (2.0 * l * l);
        }
        for i in 0..a.features.len() {
            let l1 = self.params.alpha * a.feature_sd[i];
            let l2 = self.params.alpha * b.feature_sd[i];
            let denom = l1 * l1 + l2 * l2;
            prefactor *= (2.0 * l1 * l2 / denom).sqrt();
            let diff = a.features[i] - b.features[i];
            exponent += diff * diff / denom;
        }
        prefactor * (-exponent).exp()
    }

    fn diag(&self, _a: &AugmentedPoint) -> f64 {
        1.0
    }
}
