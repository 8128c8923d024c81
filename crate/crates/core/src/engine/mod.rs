//! The two-arm loop.
//!
//! Each iteration refits one rank GP per abstract property, rebuilds the
//! augmented inputs of every evaluated design, tunes a control GP on raw
//! inputs and a human GP on augmented inputs against a shared held-out
//! split, and Thompson-samples whichever arm scores the higher held-out
//! predictive likelihood. The engine is driven from outside: callers feed
//! it observations and preferences, so the same state machine serves the
//! simulated runner and interactive sessions.

pub mod config;
mod runner;
pub mod trace;

pub use config::{EngineMode, LoopConfig, Method, DEFAULT_FLIP_PROB};
pub use runner::{run, run_method, RunFailure};
pub use trace::{
    Arm, ArmReport, InitialRecord, RankReport, RunTrace, StepRecord, TraceHeader, TraceRecord, TraceSummary,
};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::acquisition::{argmax_lowest, expected_improvement_value, thompson_sample, CandidateGrid};
use crate::error::{BoapError, Result};
use crate::gp::{GpPosterior, Standardizer};
use crate::hyperopt::{optimize_hyperparams, HyperoptOutcome, ParamBound};
use crate::kernel::{
    ArdKernel, ArdKernelParams, AugmentedPoint, SpatialKernel, SpatialKernelParams, ALPHA_BOUNDS, LENGTHSCALE_BOUNDS,
};
use crate::oracles::Problem;
use crate::rank_gp::{optimize_rank_gp, PreferencePair, PreferenceSet, PropertyModel};
use crate::rng::{derive_seed, stream};
use crate::space::SearchSpace;

/// Static description of the problem an engine optimizes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInfo {
    pub name: String,
    pub method: String,
    pub space: SearchSpace,
    pub pool: Option<Vec<Vec<f64>>>,
    pub property_labels: Vec<String>,
    pub true_max: Option<f64>,
}

impl ProblemInfo {
    pub fn from_problem(problem: &dyn Problem, method: &str) -> Self {
        Self {
            name: problem.name().to_string(),
            method: method.to_string(),
            space: problem.space().clone(),
            pool: problem.candidate_pool().map(|p| p.to_vec()),
            property_labels: problem.property_labels(),
            true_max: problem.true_max(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub design: Vec<f64>,
    pub unit: Vec<f64>,
    pub y: f64,
    /// Exact objective value when known, otherwise `y`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suggestion {
    pub t: usize,
    pub design: Vec<f64>,
    pub unit: Vec<f64>,
    pub arm: Arm,
    pub control: Option<ArmReport>,
    pub human: Option<ArmReport>,
    pub rank: Vec<RankReport>,
    pub human_flagged: bool,
}

/// Arm selection: the human arm wins only on a strictly larger likelihood.
pub fn select_arm(human_likelihood: f64, control_likelihood: f64) -> Arm {
    if human_likelihood > control_likelihood {
        Arm::Human
    } else {
        Arm::Control
    }
}

/// Held-out count: ⌈fraction · n⌉, at least one, leaving one for training.
pub fn holdout_size(n: usize, fraction: f64) -> usize {
    ((n as f64 * fraction).ceil() as usize).max(1).min(n.saturating_sub(1))
}

#[derive(Debug, Clone, Default)]
struct WarmStarts {
    rank: Vec<Option<Vec<f64>>>,
    control: Option<Vec<f64>>,
    human: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct Engine {
    config: LoopConfig,
    info: ProblemInfo,
    observations: Vec<Observation>,
    prefsets: Vec<PreferenceSet>,
    /// Per property: observation index → instance index.
    instance_of: Vec<Vec<usize>>,
    warm: WarmStarts,
    trace: RunTrace,
    pending: Option<Suggestion>,
}

struct Fitted {
    models: Vec<PropertyModel>,
    reports: Vec<RankReport>,
    flagged: bool,
}

impl Engine {
    pub fn new(config: LoopConfig, info: ProblemInfo) -> Result<Self> {
        config.validate()?;
        if info.space.dim() != config.dim {
            return Err(BoapError::DimensionMismatch {
                expected: config.dim,
                got: info.space.dim(),
            });
        }
        let m = if config.mode.uses_properties() {
            config.num_properties
        } else {
            0
        };
        if config.mode.uses_properties() && info.property_labels.len() < m {
            return Err(BoapError::InvalidArgument(format!(
                "config asks for {m} properties but the problem defines {}",
                info.property_labels.len()
            )));
        }
        if let Some(pool) = &info.pool {
            if pool.len() < config.initial {
                return Err(BoapError::InvalidArgument(
                    "candidate pool smaller than the initial design count".into(),
                ));
            }
        }
        let labels: Vec<String> = info.property_labels.iter().take(m).cloned().collect();
        let header = TraceHeader {
            problem: info.name.clone(),
            method: info.method.clone(),
            mode: config.mode,
            seed: config.seed,
            dim: config.dim,
            initial: config.initial,
            budget: config.budget,
            property_labels: labels.clone(),
            signal_variance: config.signal_variance,
            noise_variance: config.noise_variance,
            pref_noise: config.pref_noise,
            holdout_fraction: config.holdout_fraction,
            grid_size: config.grid_size(),
            true_max: info.true_max,
        };
        Ok(Self {
            prefsets: labels.iter().map(|l| PreferenceSet::new(l.clone())).collect(),
            instance_of: vec![Vec::new(); m],
            warm: WarmStarts {
                rank: vec![None; m],
                ..Default::default()
            },
            trace: RunTrace {
                header: Some(header),
                ..Default::default()
            },
            config,
            info,
            observations: Vec::new(),
            pending: None,
        })
    }

    pub fn config(&self) -> &LoopConfig {
        &self.config
    }

    pub fn info(&self) -> &ProblemInfo {
        &self.info
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn preference_sets(&self) -> &[PreferenceSet] {
        &self.prefsets
    }

    /// Number of properties the engine actually models.
    pub fn num_properties(&self) -> usize {
        self.prefsets.len()
    }

    pub fn trace(&self) -> &RunTrace {
        &self.trace
    }

    pub fn into_trace(self) -> RunTrace {
        self.trace
    }

    pub fn pending(&self) -> Option<&Suggestion> {
        self.pending.as_ref()
    }

    pub fn started(&self) -> bool {
        self.trace.initial.is_some()
    }

    pub fn is_finished(&self) -> bool {
        if !self.started() {
            return false;
        }
        if self.observations.len() >= self.config.budget {
            return true;
        }
        match &self.info.pool {
            Some(_) => self.unevaluated_pool().is_empty(),
            None => false,
        }
    }

    /// Seeded initial designs: uniform in the box, or distinct pool rows.
    pub fn initial_designs(&self) -> Vec<Vec<f64>> {
        let mut rng = stream(self.config.seed, "init", 0);
        match &self.info.pool {
            Some(pool) => rand::seq::index::sample(&mut rng, pool.len(), self.config.initial)
                .into_iter()
                .map(|i| pool[i].clone())
                .collect(),
            None => (0..self.config.initial)
                .map(|_| {
                    let u: Vec<f64> = (0..self.config.dim).map(|_| rng.gen::<f64>()).collect();
                    self.info.space.denormalize(&u)
                })
                .collect(),
        }
    }

    fn push_observation(&mut self, design: Vec<f64>, y: f64, value: Option<f64>) -> Result<usize> {
        if design.len() != self.config.dim {
            return Err(BoapError::DimensionMismatch {
                expected: self.config.dim,
                got: design.len(),
            });
        }
        if !y.is_finite() {
            return Err(BoapError::InvalidArgument(format!("observation {y} is not finite")));
        }
        let unit = self.info.space.normalize(&design);
        for (set, map) in self.prefsets.iter_mut().zip(&mut self.instance_of) {
            map.push(set.add_instance(unit.clone()));
        }
        self.observations.push(Observation {
            design,
            unit,
            y,
            value: value.unwrap_or(y),
        });
        Ok(self.observations.len() - 1)
    }

    /// Preferences are given per property over observation indices.
    fn push_preferences(&mut self, prefs: &[Vec<PreferencePair>]) -> Result<()> {
        if !prefs.is_empty() && prefs.len() != self.prefsets.len() {
            return Err(BoapError::InvalidArgument(format!(
                "got preferences for {} properties, engine models {}",
                prefs.len(),
                self.prefsets.len()
            )));
        }
        for (i, pairs) in prefs.iter().enumerate() {
            for p in pairs {
                let n = self.observations.len();
                if p.winner >= n || p.loser >= n {
                    return Err(BoapError::InvalidArgument(format!(
                        "preference ({}, {}) references an unknown observation",
                        p.winner, p.loser
                    )));
                }
                let map = &self.instance_of[i];
                let pair = PreferencePair::new(map[p.winner], map[p.loser]);
                if pair.winner == pair.loser {
                    // Identical designs carry no ordering information.
                    continue;
                }
                self.prefsets[i].add_pair(pair)?;
            }
        }
        Ok(())
    }

    fn preference_counts(&self) -> Vec<usize> {
        self.prefsets.iter().map(|s| s.pairs().len()).collect()
    }

    fn incumbent(&self) -> (usize, f64, f64) {
        let ys: Vec<f64> = self.observations.iter().map(|o| o.y).collect();
        let best = argmax_lowest(&ys);
        let best_value = self
            .observations
            .iter()
            .map(|o| o.value)
            .fold(f64::NEG_INFINITY, f64::max);
        (best, ys[best], best_value)
    }

    fn regret(&self, best_value: f64) -> Option<f64> {
        self.info.true_max.map(|m| (m - best_value).max(0.0))
    }

    /// Records the initial designs, their observations and all preferences
    /// among them.
    pub fn begin(&mut self, initial: Vec<(Vec<f64>, f64, Option<f64>)>, prefs: &[Vec<PreferencePair>]) -> Result<()> {
        if self.started() {
            return Err(BoapError::InvalidArgument("engine already started".into()));
        }
        if initial.is_empty() {
            return Err(BoapError::InvalidArgument(
                "need at least one initial observation".into(),
            ));
        }
        for (design, y, value) in initial {
            self.push_observation(design, y, value)?;
        }
        self.push_preferences(prefs)?;
        let (_, incumbent, best_value) = self.incumbent();
        self.trace.initial = Some(InitialRecord {
            t: self.observations.len(),
            designs: self.observations.iter().map(|o| o.design.clone()).collect(),
            ys: self.observations.iter().map(|o| o.y).collect(),
            values: self.observations.iter().map(|o| o.value).collect(),
            preference_counts: self.preference_counts(),
            incumbent,
            best_value,
            simple_regret: self.regret(best_value),
        });
        self.refresh_summary();
        Ok(())
    }

    fn refresh_summary(&mut self) {
        let (best, best_y, best_value) = self.incumbent();
        let human_steps = self.trace.steps.iter().filter(|s| s.arm == Arm::Human).count();
        self.trace.summary = Some(TraceSummary {
            best_design: self.observations[best].design.clone(),
            best_y,
            best_value,
            final_regret: self.regret(best_value),
            human_steps,
            control_steps: self.trace.steps.len() - human_steps,
            steps: self.trace.steps.len(),
        });
    }

    fn unevaluated_pool(&self) -> Vec<Vec<f64>> {
        match &self.info.pool {
            Some(pool) => pool
                .iter()
                .filter(|d| !self.observations.iter().any(|o| &o.design == *d))
                .cloned()
                .collect(),
            None => Vec::new(),
        }
    }

    /// Candidate designs for iteration `t` as (raw, unit) pairs.
    fn candidates(&self, t: usize) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        match &self.info.pool {
            Some(_) => {
                let raw = self.unevaluated_pool();
                if raw.is_empty() {
                    return Err(BoapError::BudgetExhausted(self.observations.len()));
                }
                let unit = raw.iter().map(|d| self.info.space.normalize(d)).collect();
                Ok((raw, unit))
            }
            None => {
                let grid = CandidateGrid::halton(
                    self.config.dim,
                    self.config.grid_size(),
                    derive_seed(self.config.seed, "grid", t as u64),
                )?;
                let raw = grid.points.iter().map(|u| self.info.space.denormalize(u)).collect();
                Ok((raw, grid.points))
            }
        }
    }

    fn standardized_targets(&self) -> Vec<f64> {
        let ys: Vec<f64> = self.observations.iter().map(|o| o.y).collect();
        Standardizer::fit(&ys).apply_all(&ys)
    }

    fn split(&self, t: usize) -> (Vec<usize>, Vec<usize>) {
        let n = self.observations.len();
        let h = holdout_size(n, self.config.holdout_fraction);
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut stream(self.config.seed, "split", t as u64));
        let mut holdout = idx[..h].to_vec();
        let mut train = idx[h..].to_vec();
        holdout.sort_unstable();
        train.sort_unstable();
        (train, holdout)
    }

    fn fit_properties(&mut self, t: usize) -> Result<Fitted> {
        let units: Vec<Vec<f64>> = self.observations.iter().map(|o| o.unit.clone()).collect();
        let mut models = Vec::with_capacity(self.prefsets.len());
        let mut reports = Vec::with_capacity(self.prefsets.len());
        let mut flagged = false;
        for (i, set) in self.prefsets.iter().enumerate() {
            let seed = derive_seed(self.config.seed, &format!("rank-hyperopt-{i}"), t as u64);
            let (model, fallback) = optimize_rank_gp(
                set,
                self.config.dim,
                self.config.pref_noise,
                seed,
                self.warm.rank[i].as_deref(),
                &self.config.hyperopt,
            )?;
            flagged |= !model.converged() || fallback;
            let pm = PropertyModel::new(model, &units);
            reports.push(RankReport {
                lengthscales: pm.model.kernel_params().lengthscales.clone(),
                log_likelihood: pm.model.log_likelihood(),
                converged: pm.model.converged(),
                degenerate: pm.normalizer.degenerate,
            });
            models.push(pm);
        }
        for (i, r) in reports.iter().enumerate() {
            self.warm.rank[i] = Some(r.lengthscales.clone());
        }
        // Constant features make the spatial kernel collapse onto the plain
        // one, so the human arm cannot add anything.
        flagged |= !reports.is_empty() && reports.iter().all(|r| r.degenerate);
        Ok(Fitted {
            models,
            reports,
            flagged,
        })
    }

    fn ard_params(&self, ls: &[f64]) -> ArdKernelParams {
        ArdKernelParams {
            lengthscales: ls.to_vec(),
            signal_variance: self.config.signal_variance,
            noise_variance: self.config.noise_variance,
        }
    }

    fn tune_control(&self, xs: &[Vec<f64>], ys: &[f64], t: usize) -> HyperoptOutcome {
        let bounds = vec![ParamBound::new(LENGTHSCALE_BOUNDS.0, LENGTHSCALE_BOUNDS.1); self.config.dim];
        optimize_hyperparams(
            &bounds,
            |ls| {
                GpPosterior::fit(
                    ArdKernel::new(self.ard_params(ls)),
                    xs.to_vec(),
                    ys.to_vec(),
                    self.config.noise_variance,
                )
                .ok()
                .map(|gp| gp.log_marginal_likelihood())
            },
            derive_seed(self.config.seed, "control-hyperopt", t as u64),
            self.warm.control.as_deref(),
            &self.config.hyperopt,
        )
    }

    fn spatial(params: &[f64]) -> Result<SpatialKernel> {
        let (ls, alpha) = params.split_at(params.len() - 1);
        SpatialKernel::new(SpatialKernelParams {
            base_lengthscales: ls.to_vec(),
            alpha: alpha[0],
        })
    }

    fn tune_human(&self, xs: &[AugmentedPoint], ys: &[f64], t: usize) -> HyperoptOutcome {
        let mut bounds = vec![ParamBound::new(LENGTHSCALE_BOUNDS.0, LENGTHSCALE_BOUNDS.1); self.config.dim];
        bounds.push(ParamBound::new(ALPHA_BOUNDS.0, ALPHA_BOUNDS.1));
        optimize_hyperparams(
            &bounds,
            |p| {
                let kernel = Self::spatial(p).ok()?;
                GpPosterior::fit(kernel, xs.to_vec(), ys.to_vec(), self.config.noise_variance)
                    .ok()
                    .map(|gp| gp.log_marginal_likelihood())
            },
            derive_seed(self.config.seed, "human-hyperopt", t as u64),
            self.warm.human.as_deref(),
            &self.config.hyperopt,
        )
    }

    fn augment(models: &[PropertyModel], unit: &[f64]) -> AugmentedPoint {
        let (features, feature_sd) = models.iter().map(|m| m.features(unit)).unzip();
        AugmentedPoint {
            raw: unit.to_vec(),
            features,
            feature_sd,
        }
    }

    fn pick<T: Clone>(items: &[T], idx: &[usize]) -> Vec<T> {
        idx.iter().map(|&i| items[i].clone()).collect()
    }

    fn report(outcome: &HyperoptOutcome, likelihood: Option<f64>, augmented: bool) -> ArmReport {
        let (ls, alpha) = if augmented {
            let (ls, a) = outcome.params.split_at(outcome.params.len() - 1);
            (ls.to_vec(), Some(a[0]))
        } else {
            (outcome.params.clone(), None)
        };
        ArmReport {
            predictive_likelihood: likelihood,
            lengthscales: ls,
            alpha,
            fallback: outcome.fallback,
        }
    }

    /// Fits every model for the next iteration and proposes a design.
    pub fn suggest(&mut self) -> Result<Suggestion> {
        if !self.started() {
            return Err(BoapError::InvalidArgument("engine has no initial observations".into()));
        }
        if let Some(p) = &self.pending {
            return Ok(p.clone());
        }
        if self.observations.len() >= self.config.budget {
            return Err(BoapError::BudgetExhausted(self.observations.len()));
        }
        let t = self.observations.len() + 1;
        let ys = self.standardized_targets();
        let units: Vec<Vec<f64>> = self.observations.iter().map(|o| o.unit.clone()).collect();
        let (cand_raw, cand_unit) = self.candidates(t)?;
        let mut ts_rng = stream(self.config.seed, "thompson", t as u64);

        let fitted = if self.config.mode.uses_properties() {
            Some(self.fit_properties(t)?)
        } else {
            None
        };
        let aug: Vec<AugmentedPoint> = match &fitted {
            Some(f) => units.iter().map(|u| Self::augment(&f.models, u)).collect(),
            None => Vec::new(),
        };

        let mut control_report = None;
        let mut human_report = None;
        let mut human_params = None;
        let mut control_params = None;
        let arm = match self.config.mode {
            EngineMode::BoTs | EngineMode::BoEi => {
                let out = self.tune_control(&units, &ys, t);
                control_report = Some(Self::report(&out, None, false));
                control_params = Some(out.params);
                Arm::Control
            }
            EngineMode::BoapOa => {
                let out = self.tune_human(&aug, &ys, t);
                human_report = Some(Self::report(&out, None, true));
                human_params = Some(out.params);
                Arm::Human
            }
            EngineMode::Boap => {
                let (train, holdout) = self.split(t);
                let ys_train = Self::pick(&ys, &train);
                let control_train = Self::pick(&units, &train);
                let human_train = Self::pick(&aug, &train);

                let c_out = self.tune_control(&control_train, &ys_train, t);
                let c_gp = GpPosterior::fit(
                    ArdKernel::new(self.ard_params(&c_out.params)),
                    control_train,
                    ys_train.clone(),
                    self.config.noise_variance,
                )?;
                let c_hold: Vec<(Vec<f64>, f64)> = holdout.iter().map(|&i| (units[i].clone(), ys[i])).collect();
                let c_ll = c_gp.predictive_log_likelihood(&c_hold)?;

                let h_out = self.tune_human(&human_train, &ys_train, t);
                let h_ll = Self::spatial(&h_out.params)
                    .and_then(|k| GpPosterior::fit(k, human_train, ys_train, self.config.noise_variance))
                    .and_then(|gp| {
                        let hold: Vec<(AugmentedPoint, f64)> =
                            holdout.iter().map(|&i| (aug[i].clone(), ys[i])).collect();
                        gp.predictive_log_likelihood(&hold)
                    })
                    .ok()
                    .filter(|v| v.is_finite());

                control_report = Some(Self::report(&c_out, Some(c_ll), false));
                human_report = Some(Self::report(&h_out, h_ll, true));
                control_params = Some(c_out.params);
                human_params = Some(h_out.params);
                let flagged = fitted.as_ref().is_some_and(|f| f.flagged);
                match h_ll {
                    Some(h) if !flagged => select_arm(h, c_ll),
                    _ => Arm::Control,
                }
            }
        };
        if let Some(p) = &control_params {
            self.warm.control = Some(p.clone());
        }
        if let Some(p) = &human_params {
            self.warm.human = Some(p.clone());
        }

        let idx = match (arm, self.config.mode) {
            (Arm::Human, _) => {
                let models = &fitted.as_ref().expect("human arm implies property models").models;
                let kernel = Self::spatial(human_params.as_ref().expect("human arm tuned"))?;
                let gp = GpPosterior::fit(kernel, aug.clone(), ys.clone(), self.config.noise_variance)?;
                let query: Vec<AugmentedPoint> = cand_unit.iter().map(|u| Self::augment(models, u)).collect();
                thompson_sample(&gp, &query, &mut ts_rng)?.argmax_idx
            }
            (Arm::Control, EngineMode::BoEi) => {
                let params = self.ard_params(control_params.as_ref().expect("control arm tuned"));
                let gp = GpPosterior::fit(
                    ArdKernel::new(params),
                    units.clone(),
                    ys.clone(),
                    self.config.noise_variance,
                )?;
                let best = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let ei: Vec<f64> = cand_unit
                    .iter()
                    .map(|u| {
                        let p = gp.predict(u);
                        expected_improvement_value(p.mean, p.sd(), best)
                    })
                    .collect();
                argmax_lowest(&ei)
            }
            (Arm::Control, _) => {
                let params = self.ard_params(control_params.as_ref().expect("control arm tuned"));
                let gp = GpPosterior::fit(
                    ArdKernel::new(params),
                    units.clone(),
                    ys.clone(),
                    self.config.noise_variance,
                )?;
                thompson_sample(&gp, &cand_unit, &mut ts_rng)?.argmax_idx
            }
        };

        let (rank, human_flagged) = match fitted {
            Some(f) => (f.reports, f.flagged),
            None => (Vec::new(), false),
        };
        let suggestion = Suggestion {
            t,
            design: cand_raw[idx].clone(),
            unit: cand_unit[idx].clone(),
            arm,
            control: control_report,
            human: human_report,
            rank,
            human_flagged,
        };
        self.pending = Some(suggestion.clone());
        Ok(suggestion)
    }

    /// Records the evaluation of the pending suggestion together with the
    /// new preferences comparing it against earlier designs.
    pub fn complete(&mut self, y: f64, value: Option<f64>, prefs: &[Vec<PreferencePair>]) -> Result<&StepRecord> {
        let s = self
            .pending
            .clone()
            .ok_or_else(|| BoapError::InvalidArgument("no pending suggestion to complete".into()))?;
        let saved = (self.prefsets.clone(), self.instance_of.clone());
        let before = self.observations.len();
        self.push_observation(s.design.clone(), y, value)?;
        if let Err(e) = self.push_preferences(prefs) {
            self.observations.truncate(before);
            (self.prefsets, self.instance_of) = saved;
            return Err(e);
        }
        self.pending = None;
        let obs = self.observations.last().expect("just pushed").clone();
        let (_, incumbent, best_value) = self.incumbent();
        self.trace.steps.push(StepRecord {
            t: s.t,
            arm: s.arm,
            design: s.design,
            y: obs.y,
            value: obs.value,
            incumbent,
            best_value,
            simple_regret: self.regret(best_value),
            control: s.control,
            human: s.human,
            rank: s.rank,
            human_flagged: s.human_flagged,
            preference_counts: self.preference_counts(),
        });
        self.refresh_summary();
        Ok(self.trace.steps.last().expect("just pushed"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn select_arm_rule() {
        assert_eq!(select_arm(-1.0, -2.0), Arm::Human);
        assert_eq!(select_arm(-2.0, -2.0), Arm::Control);
        assert_eq!(select_arm(-3.0, -2.0), Arm::Control);
    }

    #[test]
    fn holdout_sizes() {
        assert_eq!(holdout_size(4, 0.2), 1);
        assert_eq!(holdout_size(5, 0.2), 1);
        assert_eq!(holdout_size(6, 0.2), 2);
        assert_eq!(holdout_size(10, 0.2), 2);
        assert_eq!(holdout_size(11, 0.2), 3);
        assert_eq!(holdout_size(2, 0.9), 1);
    }
}
