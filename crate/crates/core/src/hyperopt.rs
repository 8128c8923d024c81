//! Derivative-free multi-start hyperparameter search.
//!
//! Every parameter lives in a closed box `[lo, hi]` with `lo > 0` and is
//! searched on a log scale. Nelder–Mead runs in unconstrained logit
//! coordinates, so any iterate maps back inside the box. The returned
//! parameters are the best point evaluated across all starts, which makes
//! the result dominate every start point (including the box midpoint).

use std::cell::RefCell;

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamBound {
    pub lo: f64,
    pub hi: f64,
}

impl ParamBound {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo > 0.0 && hi >= lo, "log-scale bound needs 0 < lo <= hi");
        Self { lo, hi }
    }

    fn from_unit(&self, frac: f64) -> f64 {
        let (a, b) = (self.lo.ln(), self.hi.ln());
        (a + frac.clamp(0.0, 1.0) * (b - a)).exp().clamp(self.lo, self.hi)
    }

    fn to_unit(&self, value: f64) -> f64 {
        let (a, b) = (self.lo.ln(), self.hi.ln());
        if b == a {
            return 0.5;
        }
        ((value.clamp(self.lo, self.hi).ln() - a) / (b - a)).clamp(0.0, 1.0)
    }

    pub fn midpoint(&self) -> f64 {
        self.from_unit(0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperoptSettings {
    /// Total starts including the midpoint.
    pub starts: usize,
    pub max_iters: u64,
    pub sd_tolerance: f64,
}

impl Default for HyperoptSettings {
    fn default() -> Self {
        Self {
            starts: 8,
            max_iters: 60,
            sd_tolerance: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperoptOutcome {
    pub params: Vec<f64>,
    pub value: f64,
    /// Set when no evaluation succeeded and the midpoint was returned.
    pub fallback: bool,
    pub evaluations: usize,
}

fn sigmoid(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

fn logit(p: f64) -> f64 {
    let p = p.clamp(1e-6, 1.0 - 1e-6);
    (p / (1.0 - p)).ln()
}

struct Tracked<'a, F> {
    bounds: &'a [ParamBound],
    objective: &'a F,
    best: RefCell<Option<(Vec<f64>, f64)>>,
    evaluations: RefCell<usize>,
}

impl<F: Fn(&[f64]) -> Option<f64>> Tracked<'_, F> {
    fn decode(&self, u: &[f64]) -> Vec<f64> {
        self.bounds
            .iter()
            .zip(u)
            .map(|(b, v)| b.from_unit(sigmoid(*v)))
            .collect()
    }

    fn evaluate(&self, u: &[f64]) -> Option<f64> {
        let params = self.decode(u);
        *self.evaluations.borrow_mut() += 1;
        let value = (self.objective)(&params).filter(|v| v.is_finite())?;
        let mut best = self.best.borrow_mut();
        let improves = best.as_ref().is_none_or(|(_, b)| value > *b);
        if improves {
            *best = Some((params, value));
        }
        Some(value)
    }
}

/// Negated objective as seen by the minimizer; shares the tracker across runs.
struct Cost<'a, 'b, F>(&'a Tracked<'b, F>);

impl<F: Fn(&[f64]) -> Option<f64>> CostFunction for Cost<'_, '_, F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, u: &Self::Param) -> Result<f64, argmin::core::Error> {
        Ok(self.0.evaluate(u).map(|v| -v).unwrap_or(1e300))
    }
}

/// Maximizes `objective` over the box. `objective` returns `None` when a
/// candidate cannot be evaluated (e.g. ill-conditioned kernel matrix).
pub fn optimize_hyperparams<F>(
    bounds: &[ParamBound],
    objective: F,
    seed: u64,
    warm_start: Option<&[f64]>,
    settings: &HyperoptSettings,
) -> HyperoptOutcome
where
    F: Fn(&[f64]) -> Option<f64>,
{
    let midpoint: Vec<f64> = bounds.iter().map(ParamBound::midpoint).collect();
    if bounds.is_empty() {
        let value = objective(&[]);
        return HyperoptOutcome {
            params: vec![],
            value: value.unwrap_or(f64::NEG_INFINITY),
            fallback: value.is_none(),
            evaluations: 1,
        };
    }

    let mut rng = stream(seed, "hyperopt-starts", 0);
    let mut starts: Vec<Vec<f64>> = vec![vec![0.0; bounds.len()]];
    for _ in 1..settings.starts.max(1) {
        starts.push((0..bounds.len()).map(|_| logit(rng.gen_range(0.05..0.95))).collect());
    }
    if let Some(w) = warm_start.filter(|w| w.len() == bounds.len()) {
        starts.push(bounds.iter().zip(w).map(|(b, v)| logit(b.to_unit(*v))).collect());
    }

    let tracked = Tracked {
        bounds,
        objective: &objective,
        best: RefCell::new(None),
        evaluations: RefCell::new(0),
    };

    for start in &starts {
        if tracked.evaluate(start).is_none() {
            continue;
        }
        let mut simplex = vec![start.clone()];
        for i in 0..bounds.len() {
            let mut v = start.clone();
            v[i] += if v[i] > 0.0 { -1.0 } else { 1.0 };
            simplex.push(v);
        }
        let Ok(solver) = NelderMead::new(simplex).with_sd_tolerance(settings.sd_tolerance) else {
            continue;
        };
        // A failed local run still leaves its evaluations in `best`.
        let _ = Executor::new(Cost(&tracked), solver)
            .configure(|state| state.max_iters(settings.max_iters))
            .run();
    }

    let evaluations = *tracked.evaluations.borrow();
    match tracked.best.into_inner() {
        Some((params, value)) => HyperoptOutcome {
            params,
            value,
            fallback: false,
            evaluations,
        },
        None => HyperoptOutcome {
            params: midpoint,
            value: f64::NEG_INFINITY,
            fallback: true,
            evaluations,
        },
    }
}
