//! Analytic benchmark objectives, written in maximization form, with the
//! high-level features a simulated expert uses.

use serde::{Deserialize, Serialize};

use crate::error::{BoapError, Result};
use crate::oracles::Problem;
use crate::space::SearchSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntheticKind {
    Benchmark1d,
    Rosenbrock3d,
    Griewank5d,
}

/// Which property functions the simulated expert perceives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSet {
    /// Informative high-level features.
    Accurate,
    /// Deliberately uninformative features (sin/cos/cube).
    Inaccurate,
}

impl SyntheticKind {
    pub fn id(self) -> &'static str {
        match self {
            SyntheticKind::Benchmark1d => "benchmark1d",
            SyntheticKind::Rosenbrock3d => "rosenbrock3d",
            SyntheticKind::Griewank5d => "griewank5d",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Benchmark1d, Self::Rosenbrock3d, Self::Griewank5d]
            .into_iter()
            .find(|k| k.id() == s)
    }

    pub fn dim(self) -> usize {
        match self {
            SyntheticKind::Benchmark1d => 1,
            SyntheticKind::Rosenbrock3d => 3,
            SyntheticKind::Griewank5d => 5,
        }
    }

    pub fn default_space(self) -> SearchSpace {
        let (lo, hi) = match self {
            SyntheticKind::Benchmark1d => (0.0, 10.0),
            SyntheticKind::Rosenbrock3d => (-2.0, 2.0),
            SyntheticKind::Griewank5d => (-5.0, 5.0),
        };
        SearchSpace::uniform(self.dim(), lo, hi).expect("static bounds are valid")
    }

    /// Maximum over the default box. Benchmark-1d peaks at the upper
    /// corner x = 10; the other two are negated minimization problems with
    /// optimum 0. Cross-checked by brute force in the fixtures file.
    pub fn default_true_max(self) -> f64 {
        match self {
            SyntheticKind::Benchmark1d => benchmark1d(10.0),
            SyntheticKind::Rosenbrock3d | SyntheticKind::Griewank5d => 0.0,
        }
    }
}

/// exp((2−x)²) + exp((6−x)²/10) + 1/(x²+1)
pub fn benchmark1d(x: f64) -> f64 {
    ((2.0 - x).powi(2)).exp() + ((6.0 - x).powi(2) / 10.0).exp() + 1.0 / (x * x + 1.0)
}

/// Σ_{i<d} 100(x_{i+1} − x_i²)² + (x_i − 1)²
pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

/// Σ_i [x_i²/4000 − Π_j cos(x_j/√j) + 1], with the product inside the sum.
pub fn griewank(x: &[f64]) -> f64 {
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(j, v)| (v / ((j + 1) as f64).sqrt()).cos())
        .product();
    x.iter().map(|v| v * v / 4000.0 - prod + 1.0).sum()
}

fn inverse_square(x: f64) -> f64 {
    1.0 / (x * x).max(1e-300)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticObjective {
    kind: SyntheticKind,
    features: FeatureSet,
    space: SearchSpace,
    true_max_value: Option<f64>,
    noise_variance: f64,
}

impl SyntheticObjective {
    pub fn new(kind: SyntheticKind, features: FeatureSet) -> Self {
        Self {
            kind,
            features,
            space: kind.default_space(),
            true_max_value: Some(kind.default_true_max()),
            noise_variance: 0.1,
        }
    }

    /// Overrides the box. The known optimum is dropped unless the default
    /// box is passed back in.
    pub fn with_space(mut self, space: SearchSpace) -> Self {
        self.true_max_value = (space == self.kind.default_space()).then(|| self.kind.default_true_max());
        self.space = space;
        self
    }

    pub fn with_true_max(mut self, value: f64) -> Self {
        self.true_max_value = Some(value);
        self
    }

    pub fn with_noise(mut self, variance: f64) -> Self {
        self.noise_variance = variance;
        self
    }

    pub fn kind(&self) -> SyntheticKind {
        self.kind
    }

    pub fn features(&self) -> FeatureSet {
        self.features
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.space.dim() {
            return Err(BoapError::DimensionMismatch {
                expected: self.space.dim(),
                got: x.len(),
            });
        }
        if !self.space.contains(x) {
            return Err(BoapError::InvalidArgument(format!("{x:?} lies outside the search box")));
        }
        Ok(())
    }

    fn accurate_property(&self, idx: usize, x: &[f64]) -> f64 {
        match (self.kind, idx) {
            (SyntheticKind::Benchmark1d, 0) => ((2.0 - x[0]).powi(2)).exp(),
            (SyntheticKind::Benchmark1d, _) => inverse_square(x[0]),
            (SyntheticKind::Rosenbrock3d, 0) => (x[2] - x[1] * x[1]).powi(2) + (x[1] - x[0] * x[0]).powi(2),
            (SyntheticKind::Rosenbrock3d, _) => (x[1] - 1.0).powi(2) + (x[0] - 1.0).powi(2),
            (SyntheticKind::Griewank5d, 0) => x.iter().map(|v| v * v).sum(),
            (SyntheticKind::Griewank5d, _) => x.iter().map(|v| v.cos()).product(),
        }
    }

    // Multi-dimensional sin/cos/cube features are summed over coordinates.
    fn inaccurate_property(&self, idx: usize, x: &[f64]) -> f64 {
        match (self.kind, idx) {
            (_, 0) => x.iter().map(|v| v.sin()).sum(),
            (SyntheticKind::Griewank5d, _) => x.iter().map(|v| v.powi(3)).sum(),
            (_, _) => x.iter().map(|v| v.cos()).sum(),
        }
    }
}

impl Problem for SyntheticObjective {
    fn name(&self) -> &str {
        self.kind.id()
    }

    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn objective(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        Ok(match self.kind {
            SyntheticKind::Benchmark1d => benchmark1d(x[0]),
            SyntheticKind::Rosenbrock3d => -rosenbrock(x),
            SyntheticKind::Griewank5d => -griewank(x),
        })
    }

    fn property_labels(&self) -> Vec<String> {
        vec!["omega_1".into(), "omega_2".into()]
    }

    fn property(&self, idx: usize, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        if idx >= 2 {
            return Err(BoapError::InvalidArgument(format!("property index {idx} out of range")));
        }
        Ok(match self.features {
            FeatureSet::Accurate => self.accurate_property(idx, x),
            FeatureSet::Inaccurate => self.inaccurate_property(idx, x),
        })
    }

    fn true_max(&self) -> Option<f64> {
        self.true_max_value
    }

    fn evaluation_noise(&self) -> f64 {
        self.noise_variance
    }
}
