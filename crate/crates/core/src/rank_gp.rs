//! Rank (preference) Gaussian processes.
//!
//! Latent utilities ω over a set of instances get a zero-mean GP prior with
//! covariance Σ = K + σ̃²I and a probit likelihood per pairwise preference,
//! Φ((ω_w − ω_l)/√(2σ̃²)). The posterior mode is found by damped Newton
//! ascent and the Laplace approximation supplies predictive uncertainty.
//!
//! Sign convention: `b` is the gradient of Σ_p ln Φ(z_p) and `C` is the
//! *negated* Hessian of the same sum (the Hessian of the loss −ln Φ), so
//! `C` is positive semidefinite and `H = Σ⁻¹ + C` is the curvature of the
//! negative log posterior. The Newton update is therefore
//! `ω ← ω + H⁻¹ g` with `g = −Σ⁻¹ω + b`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{BoapError, Result};
use crate::gp::gram;
use crate::hyperopt::{optimize_hyperparams, HyperoptSettings, ParamBound};
use crate::kernel::{ArdKernel, ArdKernelParams, Kernel, LENGTHSCALE_BOUNDS};
use crate::linalg::{jittered_cholesky, log_det, solve_lower};
use crate::normal;

/// Default preference noise σ̃².
pub const DEFAULT_PREF_NOISE: f64 = 0.1;
pub const MAP_TOLERANCE: f64 = 1e-6;
pub const MAP_MAX_ITERS: usize = 100;
const MAX_HALVINGS: usize = 20;
/// Lower floor on normalized predictive sd; keeps augmented lengthscales > 0.
pub const SD_FLOOR: f64 = 1e-6;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PreferencePair {
    pub winner: usize,
    pub loser: usize,
}

impl PreferencePair {
    pub fn new(winner: usize, loser: usize) -> Self {
        Self { winner, loser }
    }

    pub fn reversed(self) -> Self {
        Self {
            winner: self.loser,
            loser: self.winner,
        }
    }
}

/// Instances and the pairwise preferences expressed over them for one
/// abstract property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceSet {
    property_id: String,
    instances: Vec<Vec<f64>>,
    pairs: Vec<PreferencePair>,
}

impl PreferenceSet {
    pub fn new(property_id: impl Into<String>) -> Self {
        Self {
            property_id: property_id.into(),
            instances: Vec::new(),
            pairs: Vec::new(),
        }
    }

    pub fn property_id(&self) -> &str {
        &self.property_id
    }

    pub fn instances(&self) -> &[Vec<f64>] {
        &self.instances
    }

    pub fn pairs(&self) -> &[PreferencePair] {
        &self.pairs
    }

    /// Adds an instance, returning the index of an identical existing one
    /// if present.
    pub fn add_instance(&mut self, x: Vec<f64>) -> usize {
        if let Some(i) = self.instances.iter().position(|v| *v == x) {
            return i;
        }
        self.instances.push(x);
        self.instances.len() - 1
    }

    pub fn add_pair(&mut self, pair: PreferencePair) -> Result<()> {
        let n = self.instances.len();
        if pair.winner == pair.loser {
            return Err(BoapError::InvalidArgument(format!(
                "preference pair compares instance {} with itself",
                pair.winner
            )));
        }
        if pair.winner >= n || pair.loser >= n {
            return Err(BoapError::InvalidArgument(format!(
                "preference pair ({}, {}) references a missing instance (have {n})",
                pair.winner, pair.loser
            )));
        }
        self.pairs.push(pair);
        Ok(())
    }
}

/// log N(ω; 0, K)
pub fn pref_log_prior(omega: &DVector<f64>, gram: &DMatrix<f64>) -> Result<f64> {
    let (chol, _) = jittered_cholesky(gram)?;
    let v = solve_lower(&chol, omega);
    let n = omega.len() as f64;
    Ok(-0.5 * v.norm_squared() - 0.5 * log_det(&chol) - 0.5 * n * LN_2PI)
}

fn z_score(omega_w: f64, omega_l: f64, pref_noise: f64) -> f64 {
    (omega_w - omega_l) / (2.0 * pref_noise).sqrt()
}

/// Probability that the winner is preferred: Φ((ω_w − ω_l)/√(2σ̃²)).
pub fn pref_likelihood(omega_w: f64, omega_l: f64, pref_noise: f64) -> f64 {
    normal::cdf(z_score(omega_w, omega_l, pref_noise))
}

/// Σ_p ln Φ(z_p)
pub fn log_likelihood_sum(omega: &DVector<f64>, pairs: &[PreferencePair], pref_noise: f64) -> f64 {
    pairs
        .iter()
        .map(|p| normal::ln_cdf(z_score(omega[p.winner], omega[p.loser], pref_noise)))
        .sum()
}

/// Gradient `b` of Σ_p ln Φ(z_p) and its negated Hessian `C`.
pub fn likelihood_derivatives(
    omega: &DVector<f64>,
    pairs: &[PreferencePair],
    pref_noise: f64,
) -> (DVector<f64>, DMatrix<f64>) {
    let n = omega.len();
    let mut b = DVector::zeros(n);
    let mut c = DMatrix::zeros(n, n);
    let s = (2.0 * pref_noise).sqrt();
    for p in pairs {
        let z = (omega[p.winner] - omega[p.loser]) / s;
        let ratio = normal::inv_mills(z);
        // Γ = +1 for the winner, −1 for the loser.
        let grad = ratio / s;
        b[p.winner] += grad;
        b[p.loser] -= grad;
        let curv = (ratio * ratio + z * ratio) / (s * s);
        c[(p.winner, p.winner)] += curv;
        c[(p.loser, p.loser)] += curv;
        c[(p.winner, p.loser)] -= curv;
        c[(p.loser, p.winner)] -= curv;
    }
    (b, c)
}

#[derive(Debug, Clone)]
pub struct RankGpModel {
    instances: Vec<Vec<f64>>,
    kernel_params: ArdKernelParams,
    omega_map: DVector<f64>,
    /// Σ⁻¹ ω_MAP, the predictive-mean weights.
    weights: DVector<f64>,
    gram_chol: Cholesky<f64, Dyn>,
    gram_jitter: f64,
    hessian_chol: Cholesky<f64, Dyn>,
    hessian: DMatrix<f64>,
    curvature: DMatrix<f64>,
    converged: bool,
    iterations: usize,
    grad_norm: f64,
}

fn log_posterior(omega: &DVector<f64>, gram_chol: &Cholesky<f64, Dyn>, pairs: &[PreferencePair], noise: f64) -> f64 {
    -0.5 * solve_lower(gram_chol, omega).norm_squared() + log_likelihood_sum(omega, pairs, noise)
}

/// MAP latent utilities for one property, starting Newton from zero.
pub fn fit_map(prefset: &PreferenceSet, params: &ArdKernelParams) -> Result<RankGpModel> {
    fit_map_from(prefset, params, None)
}

pub fn fit_map_from(prefset: &PreferenceSet, params: &ArdKernelParams, init: Option<&[f64]>) -> Result<RankGpModel> {
    params.validate()?;
    let n = prefset.instances.len();
    if n == 0 {
        return Err(BoapError::InvalidArgument("rank GP needs at least one instance".into()));
    }
    let dim = params.lengthscales.len();
    if let Some(bad) = prefset.instances.iter().find(|x| x.len() != dim) {
        return Err(BoapError::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    let pairs = &prefset.pairs;
    let noise = params.noise_variance;
    let kernel = ArdKernel::new(params.clone());
    let mut sigma = gram(&kernel, &prefset.instances);
    for i in 0..n {
        sigma[(i, i)] += noise;
    }
    let (gram_chol, gram_jitter) = jittered_cholesky(&sigma)?;
    let sigma_inv = gram_chol.inverse();

    let mut omega = match init {
        Some(v) if v.len() == n => DVector::from_column_slice(v),
        _ => DVector::zeros(n),
    };
    let mut objective = log_posterior(&omega, &gram_chol, pairs, noise);
    let mut converged = false;
    let mut iterations = 0;
    let mut grad_norm;
    loop {
        let (b, c) = likelihood_derivatives(&omega, pairs, noise);
        let g = -&sigma_inv * &omega + b;
        grad_norm = g.amax();
        if grad_norm <= MAP_TOLERANCE {
            converged = true;
            break;
        }
        if iterations >= MAP_MAX_ITERS {
            break;
        }
        iterations += 1;
        let h = &sigma_inv + c;
        let (h_chol, _) = jittered_cholesky(&h)?;
        let step = h_chol.solve(&g);
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let candidate = &omega + &step * scale;
            let value = log_posterior(&candidate, &gram_chol, pairs, noise);
            if value >= objective {
                omega = candidate;
                objective = value;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            // No ascent along the Newton direction; keep the best iterate.
            break;
        }
    }

    let (_, curvature) = likelihood_derivatives(&omega, pairs, noise);
    let hessian = &sigma_inv + &curvature;
    let (hessian_chol, _) = jittered_cholesky(&hessian)?;
    let weights = gram_chol.solve(&omega);
    Ok(RankGpModel {
        instances: prefset.instances.clone(),
        kernel_params: params.clone(),
        omega_map: omega,
        weights,
        gram_chol,
        gram_jitter,
        hessian_chol,
        hessian,
        curvature,
        converged,
        iterations,
        grad_norm,
    })
}

impl RankGpModel {
    pub fn omega_map(&self) -> &DVector<f64> {
        &self.omega_map
    }

    pub fn kernel_params(&self) -> &ArdKernelParams {
        &self.kernel_params
    }

    pub fn instances(&self) -> &[Vec<f64>] {
        &self.instances
    }

    pub fn hessian(&self) -> &DMatrix<f64> {
        &self.hessian
    }

    pub fn curvature(&self) -> &DMatrix<f64> {
        &self.curvature
    }

    /// Diagonal jitter added to K + σ̃²I before factorization.
    pub fn jitter(&self) -> f64 {
        self.gram_jitter
    }

    pub fn pref_noise(&self) -> f64 {
        self.kernel_params.noise_variance
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn grad_norm(&self) -> f64 {
        self.grad_norm
    }

    /// −½ ω_MAPᵀ Σ⁻¹ ω_MAP − ½ log|Σ| − (n/2) log 2π with Σ = K + σ̃²I.
    pub fn log_likelihood(&self) -> f64 {
        let n = self.omega_map.len() as f64;
        -0.5 * self.omega_map.dot(&self.weights) - 0.5 * log_det(&self.gram_chol) - 0.5 * n * LN_2PI
    }

    /// Predictive mean kᵀΣ⁻¹ω_MAP and Laplace predictive sd
    /// `sqrt(k(x,x) − kᵀΣ⁻¹k + (Σ⁻¹k)ᵀ H⁻¹ (Σ⁻¹k))`.
    pub fn predict(&self, x: &[f64]) -> (f64, f64) {
        let kernel = ArdKernel::new(self.kernel_params.clone());
        let x = x.to_vec();
        let k = DVector::from_iterator(
            self.instances.len(),
            self.instances.iter().map(|xi| kernel.eval(xi, &x)),
        );
        let mean = k.dot(&self.weights);
        let a = self.gram_chol.solve(&k);
        let hinv_a = self.hessian_chol.solve(&a);
        let var = kernel.diag(&x) - k.dot(&a) + a.dot(&hinv_a);
        (mean, var.max(0.0).sqrt())
    }
}

pub fn rank_gp_log_likelihood(model: &RankGpModel) -> f64 {
    model.log_likelihood()
}

pub fn rank_predict(model: &RankGpModel, x: &[f64]) -> (f64, f64) {
    model.predict(x)
}

/// Fits a rank GP with lengthscales chosen to maximize its log-likelihood.
/// Signal variance stays at 1 and preference noise at `pref_noise`.
pub fn optimize_rank_gp(
    prefset: &PreferenceSet,
    dim: usize,
    pref_noise: f64,
    seed: u64,
    warm_start: Option<&[f64]>,
    settings: &HyperoptSettings,
) -> Result<(RankGpModel, bool)> {
    let bounds = vec![ParamBound::new(LENGTHSCALE_BOUNDS.0, LENGTHSCALE_BOUNDS.1); dim];
    let make = |ls: &[f64]| ArdKernelParams::new(ls.to_vec()).with_noise(pref_noise);
    let outcome = optimize_hyperparams(
        &bounds,
        |ls| fit_map(prefset, &make(ls)).ok().map(|m| m.log_likelihood()),
        seed,
        warm_start,
        settings,
    );
    let model = fit_map(prefset, &make(&outcome.params))?;
    Ok((model, outcome.fallback))
}

/// Min–max normalization of a property model's predictions over a
/// reference set, with the sd scaled by its reference maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputNormalizer {
    pub mean_min: f64,
    pub mean_max: f64,
    pub sd_max: f64,
    /// All reference means coincide; every query maps to 0.5.
    pub degenerate: bool,
}

impl OutputNormalizer {
    pub fn from_predictions(means: &[f64], sds: &[f64]) -> Self {
        let mean_min = means.iter().copied().fold(f64::INFINITY, f64::min);
        let mean_max = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sd_max = sds.iter().copied().fold(0.0, f64::max);
        let range = mean_max - mean_min;
        let degenerate = !(range > 1e-12 * (1.0 + mean_max.abs().max(mean_min.abs())));
        Self {
            mean_min,
            mean_max,
            sd_max,
            degenerate,
        }
    }

    pub fn mean(&self, mu: f64) -> f64 {
        if self.degenerate {
            0.5
        } else {
            ((mu - self.mean_min) / (self.mean_max - self.mean_min)).clamp(0.0, 1.0)
        }
    }

    pub fn sd(&self, sd: f64) -> f64 {
        if self.sd_max > 0.0 {
            (sd / self.sd_max).clamp(SD_FLOOR, 1.0)
        } else {
            1.0
        }
    }
}

pub fn normalize_outputs(model: &RankGpModel, reference_points: &[Vec<f64>]) -> OutputNormalizer {
    let (means, sds): (Vec<f64>, Vec<f64>) = reference_points.iter().map(|x| model.predict(x)).unzip();
    OutputNormalizer::from_predictions(&means, &sds)
}

/// A fitted rank GP together with its output normalization.
#[derive(Debug, Clone)]
pub struct PropertyModel {
    pub model: RankGpModel,
    pub normalizer: OutputNormalizer,
}

impl PropertyModel {
    pub fn new(model: RankGpModel, reference_points: &[Vec<f64>]) -> Self {
        let normalizer = normalize_outputs(&model, reference_points);
        Self { model, normalizer }
    }

    /// Normalized (mean, sd) in [0,1].
    pub fn features(&self, x: &[f64]) -> (f64, f64) {
        let (mu, sd) = self.model.predict(x);
        (self.normalizer.mean(mu), self.normalizer.sd(sd))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> PreferenceSet {
        let mut set = PreferenceSet::new("p");
        for i in 0..n {
            set.add_instance(vec![i as f64 / n as f64]);
        }
        for i in 0..n - 1 {
            set.add_pair(PreferencePair::new(i, i + 1)).unwrap();
        }
        set
    }

    #[test]
    fn prior_at_zero() {
        let k = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 1.0]);
        let lp = pref_log_prior(&DVector::zeros(2), &k).unwrap();
        let expected = -0.5 * (1.0f64 - 0.09).ln() - LN_2PI;
        assert!((lp - expected).abs() < 1e-9);
    }

    #[test]
    fn scalar_prior() {
        let lp = pref_log_prior(&DVector::from_element(1, 1.0), &DMatrix::identity(1, 1)).unwrap();
        assert!((lp - (-0.5 - 0.5 * LN_2PI)).abs() < 1e-9);
        assert!((lp + 1.418_94).abs() < 1e-5);
    }

    #[test]
    fn likelihood_tie_and_symmetry() {
        assert_eq!(pref_likelihood(0.3, 0.3, 0.1), 0.5);
        assert!((pref_likelihood(1.0, 0.0, 0.5) - 0.841_34).abs() < 1e-5);
        let (a, b) = (0.7, -0.2);
        assert!((pref_likelihood(a, b, 0.1) + pref_likelihood(b, a, 0.1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_untouched_index_is_zero() {
        let omega = DVector::from_vec(vec![0.1, -0.4, 0.9]);
        let (b, c) = likelihood_derivatives(&omega, &[PreferencePair::new(0, 1)], 0.1);
        assert_eq!(b[2], 0.0);
        for i in 0..3 {
            assert_eq!(c[(2, i)], 0.0);
            assert_eq!(c[(i, 2)], 0.0);
        }
    }

    #[test]
    fn derivative_at_tie() {
        let omega = DVector::zeros(2);
        let (b, _) = likelihood_derivatives(&omega, &[PreferencePair::new(0, 1)], 0.5);
        assert!((b[0] - 0.797_88).abs() < 1e-5);
        assert!((b[0] + b[1]).abs() < 1e-15);
    }

    #[test]
    fn extreme_disagreement_stays_finite() {
        let omega = DVector::from_vec(vec![-60.0, 60.0]);
        let (b, c) = likelihood_derivatives(&omega, &[PreferencePair::new(0, 1)], 0.1);
        assert!(b.iter().all(|v| v.is_finite()));
        assert!(c.iter().all(|v| v.is_finite()));
        assert!(log_likelihood_sum(&omega, &[PreferencePair::new(0, 1)], 0.1).is_finite());
    }

    #[test]
    fn chain_orders_utilities() {
        let set = chain(3);
        let m = fit_map(&set, &ArdKernelParams::new(vec![0.5]).with_noise(0.1)).unwrap();
        let w = m.omega_map();
        assert!(w[0] > w[1] && w[1] > w[2], "{w}");
        assert!(m.converged());
        assert!(m.grad_norm() <= MAP_TOLERANCE);
    }

    #[test]
    fn no_pairs_gives_prior_mode() {
        let mut set = PreferenceSet::new("p");
        set.add_instance(vec![0.1]);
        set.add_instance(vec![0.7]);
        let m = fit_map(&set, &ArdKernelParams::new(vec![0.5]).with_noise(0.1)).unwrap();
        assert_eq!(m.omega_map().amax(), 0.0);
        assert!(m.converged());
    }

    #[test]
    fn flipped_pairs_negate_utilities() {
        let set = chain(4);
        let mut flipped = PreferenceSet::new("p");
        for x in set.instances() {
            flipped.add_instance(x.clone());
        }
        for p in set.pairs() {
            flipped.add_pair(p.reversed()).unwrap();
        }
        let params = ArdKernelParams::new(vec![0.4]).with_noise(0.1);
        let a = fit_map(&set, &params).unwrap();
        let b = fit_map(&flipped, &params).unwrap();
        for i in 0..4 {
            assert!((a.omega_map()[i] + b.omega_map()[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn pair_validation() {
        let mut set = PreferenceSet::new("p");
        set.add_instance(vec![0.0]);
        assert!(set.add_pair(PreferencePair::new(0, 0)).is_err());
        assert!(set.add_pair(PreferencePair::new(0, 1)).is_err());
        assert_eq!(set.add_instance(vec![0.0]), 0);
    }

    #[test]
    fn log_likelihood_at_zero_map() {
        let mut set = PreferenceSet::new("p");
        set.add_instance(vec![0.2]);
        set.add_instance(vec![0.6]);
        let params = ArdKernelParams::new(vec![0.5]).with_noise(0.1);
        let m = fit_map(&set, &params).unwrap();
        let k01 = (-0.5f64 * (0.4 / 0.5f64).powi(2)).exp();
        let det = 1.1f64 * 1.1 - k01 * k01;
        let expected = -0.5 * det.ln() - LN_2PI;
        assert!((m.log_likelihood() - expected).abs() < 1e-8);
    }

    #[test]
    fn prediction_interpolates_and_reverts() {
        let set = chain(3);
        let m = fit_map(&set, &ArdKernelParams::new(vec![0.3]).with_noise(1e-6)).unwrap();
        let (mu, sd) = m.predict(&[1.0 / 3.0]);
        assert!((mu - m.omega_map()[1]).abs() < 1e-3, "{mu} vs {}", m.omega_map()[1]);
        assert!(sd >= 0.0);
        let (mu_far, sd_far) = m.predict(&[40.0]);
        assert!(mu_far.abs() < 1e-12);
        assert!((sd_far - 1.0).abs() < 1e-9);
    }

    #[test]
    fn normalizer_min_max_and_clip() {
        let n = OutputNormalizer::from_predictions(&[-2.0, 0.0, 2.0], &[0.5, 1.0, 0.25]);
        assert_eq!([n.mean(-2.0), n.mean(0.0), n.mean(2.0)], [0.0, 0.5, 1.0]);
        assert_eq!(n.mean(-5.0), 0.0);
        assert_eq!(n.mean(7.0), 1.0);
        assert_eq!(n.sd(1.0), 1.0);
        assert_eq!(n.sd(0.5), 0.5);
        assert!(!n.degenerate);
    }

    #[test]
    fn normalizer_degenerate() {
        let n = OutputNormalizer::from_predictions(&[0.3, 0.3], &[0.2, 0.2]);
        assert!(n.degenerate);
        assert_eq!(n.mean(100.0), 0.5);
    }
}
