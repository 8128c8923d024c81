//! Experiment configuration files.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use boap_core::engine::{LoopConfig, Method, DEFAULT_FLIP_PROB};
use boap_core::oracles::SyntheticKind;
use boap_core::rng::repeat_seed;
use serde::{Deserialize, Serialize};

/// One experiment: a problem, the methods to compare and the repeats.
///
/// ```toml
/// name = "benchmark1d"
/// methods = ["boap", "bo_ts"]
/// repeats = 10
/// seed = 0
///
/// [problem]
/// kind = "synthetic"
/// function = "benchmark1d"
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub methods: Vec<Method>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    /// Master seed; repeat k runs with a seed split from it.
    #[serde(default)]
    pub seed: u64,
    /// Explicit per-repeat seeds. Overrides `repeats` and `seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    /// Flip probability δ for the noisy-preference method.
    #[serde(default = "default_flip")]
    pub flip_prob: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub problem: ProblemSpec,
    #[serde(default)]
    pub overrides: Overrides,
}

fn default_repeats() -> usize {
    10
}

fn default_flip() -> f64 {
    DEFAULT_FLIP_PROB
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    Synthetic {
        function: SyntheticKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lower: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        upper: Option<Vec<f64>>,
        /// Needed for regret when the box is overridden.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        true_max: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        noise_variance: Option<f64>,
    },
    Dataset {
        /// Relative paths resolve against the config file's directory.
        path: PathBuf,
        schema: PathBuf,
    },
}

/// Loop settings that replace the protocol defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_per_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holdout_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_properties: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).context("parsing experiment config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads a config and resolves dataset paths against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = Self::from_toml(&text).with_context(|| format!("in {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let ProblemSpec::Dataset { path, schema } = &mut cfg.problem {
            for p in [path, schema] {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        if let Some(out) = &mut cfg.output {
            if out.is_relative() {
                *out = base.join(&*out);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            bail!("no methods listed");
        }
        if self.seeds.as_ref().map_or(self.repeats, Vec::len) == 0 {
            bail!("repeats must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.flip_prob) {
            bail!("flip_prob must lie in [0, 1]");
        }
        if let ProblemSpec::Synthetic {
            function, lower, upper, ..
        } = &self.problem
        {
            for b in [lower, upper].into_iter().flatten() {
                if b.len() != function.dim() {
                    bail!("{} takes {} bounds, got {}", function.id(), function.dim(), b.len());
                }
            }
            if lower.is_some() != upper.is_some() {
                bail!("override both lower and upper bounds or neither");
            }
        }
        if matches!(self.problem, ProblemSpec::Dataset { .. }) && self.methods.contains(&Method::BoapIa) {
            bail!("boap_ia needs analytic features; datasets only carry measured properties");
        }
        Ok(())
    }

    /// Per-repeat seeds, independent of the method.
    pub fn repeat_seeds(&self) -> Vec<u64> {
        match &self.seeds {
            Some(s) => s.clone(),
            None => (0..self.repeats).map(|k| repeat_seed(self.seed, k)).collect(),
        }
    }

    /// Protocol defaults for the problem with overrides applied.
    pub fn loop_config(&self, dim: usize, num_properties: usize, seed: u64, method: Method) -> LoopConfig {
        let m = self.overrides.num_properties.unwrap_or(num_properties);
        let mut cfg = match self.problem {
            ProblemSpec::Synthetic { .. } => LoopConfig::synthetic(dim, m, seed, method.mode()),
            ProblemSpec::Dataset { .. } => LoopConfig::dataset(dim, m, seed, method.mode()),
        };
        let o = &self.overrides;
        if let Some(v) = o.initial {
            cfg.initial = v;
        }
        if let Some(v) = o.budget {
            cfg.budget = v;
        }
        if let Some(v) = o.grid_per_dim {
            cfg.grid_per_dim = v;
        }
        if let Some(v) = o.holdout_fraction {
            cfg.holdout_fraction = v;
        }
        cfg
    }
}
