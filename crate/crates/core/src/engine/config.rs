use serde::{Deserialize, Serialize};

use crate::error::{BoapError, Result};
use crate::hyperopt::HyperoptSettings;
use crate::kernel::{DEFAULT_NOISE_VARIANCE, DEFAULT_SIGNAL_VARIANCE};
use crate::oracles::FeatureSet;
use crate::rank_gp::DEFAULT_PREF_NOISE;

/// What the engine does each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineMode {
    /// Two arms, chosen by held-out predictive likelihood.
    Boap,
    /// Augmented arm only.
    BoapOa,
    /// Plain GP with Thompson sampling.
    BoTs,
    /// Plain GP with Expected Improvement.
    BoEi,
}

impl EngineMode {
    pub fn uses_properties(self) -> bool {
        matches!(self, EngineMode::Boap | EngineMode::BoapOa)
    }
}

/// Experiment-level method: an engine mode plus the expert it is paired with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Boap,
    BoapOa,
    /// BOAP with deliberately uninformative property features.
    BoapIa,
    /// BOAP with preference answers flipped at random.
    BoapNp,
    BoTs,
    BoEi,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Boap,
        Method::BoapOa,
        Method::BoapIa,
        Method::BoapNp,
        Method::BoTs,
        Method::BoEi,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Method::Boap => "boap",
            Method::BoapOa => "boap_oa",
            Method::BoapIa => "boap_ia",
            Method::BoapNp => "boap_np",
            Method::BoTs => "bo_ts",
            Method::BoEi => "bo_ei",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.id() == s)
    }

    pub fn mode(self) -> EngineMode {
        match self {
            Method::Boap | Method::BoapIa | Method::BoapNp => EngineMode::Boap,
            Method::BoapOa => EngineMode::BoapOa,
            Method::BoTs => EngineMode::BoTs,
            Method::BoEi => EngineMode::BoEi,
        }
    }

    pub fn features(self) -> FeatureSet {
        match self {
            Method::BoapIa => FeatureSet::Inaccurate,
            _ => FeatureSet::Accurate,
        }
    }

    /// Expert flip probability for this method given the configured δ.
    pub fn flip_prob(self, delta: f64) -> f64 {
        match self {
            Method::BoapNp => delta,
            _ => 0.0,
        }
    }
}

pub const DEFAULT_FLIP_PROB: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopConfig {
    pub dim: usize,
    /// Total evaluations T, initial designs included.
    pub budget: usize,
    /// Initial designs t'.
    pub initial: usize,
    pub num_properties: usize,
    pub seed: u64,
    pub signal_variance: f64,
    pub noise_variance: f64,
    pub pref_noise: f64,
    pub holdout_fraction: f64,
    /// Thompson/EI candidates per input dimension.
    pub grid_per_dim: usize,
    pub mode: EngineMode,
    pub hyperopt: HyperoptSettings,
}

impl LoopConfig {
    /// t' = d + 3 and T = 10d + 5.
    pub fn synthetic(dim: usize, num_properties: usize, seed: u64, mode: EngineMode) -> Self {
        Self {
            dim,
            budget: 10 * dim + 5,
            initial: dim + 3,
            num_properties,
            seed,
            signal_variance: DEFAULT_SIGNAL_VARIANCE,
            noise_variance: DEFAULT_NOISE_VARIANCE,
            pref_noise: DEFAULT_PREF_NOISE,
            holdout_fraction: 0.2,
            grid_per_dim: 100,
            mode,
            hyperopt: HyperoptSettings::default(),
        }
    }

    /// Discrete-pool protocol: 4 initial designs followed by 50 iterations.
    pub fn dataset(dim: usize, num_properties: usize, seed: u64, mode: EngineMode) -> Self {
        Self {
            budget: 54,
            initial: 4,
            ..Self::synthetic(dim, num_properties, seed, mode)
        }
    }

    pub fn grid_size(&self) -> usize {
        self.grid_per_dim * self.dim
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(BoapError::InvalidArgument(m));
        if self.dim == 0 {
            return fail("dim must be positive".into());
        }
        if self.initial == 0 {
            return fail("need at least one initial design".into());
        }
        if self.initial > self.budget {
            return fail(format!(
                "initial designs ({}) exceed the budget ({})",
                self.initial, self.budget
            ));
        }
        if !(self.noise_variance > 0.0 && self.pref_noise > 0.0 && self.signal_variance > 0.0) {
            return fail("variances must be positive".into());
        }
        if !(self.holdout_fraction > 0.0 && self.holdout_fraction < 1.0) {
            return fail("holdout fraction must lie in (0,1)".into());
        }
        if self.grid_per_dim == 0 {
            return fail("grid size must be positive".into());
        }
        if self.mode.uses_properties() && self.num_properties == 0 {
            return fail("augmented modes need at least one property".into());
        }
        Ok(())
    }
}
