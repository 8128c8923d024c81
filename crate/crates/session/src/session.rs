//! One interactive run: the engine plus the open questions put to the
//! human, driven by an append-only event stream.

use std::collections::HashSet;

use boap_core::engine::{Engine, LoopConfig, ProblemInfo};
use boap_core::rank_gp::PreferencePair;
use boap_core::SearchSpace;
use serde::{Deserialize, Serialize};

use crate::api::{
    Answer, CreateSession, DesignRef, FieldError, ObservationInput, PendingObservation, Phase, Query, SessionView,
    Side, SubmitAnswers,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SessionError {
    #[error("invalid request")]
    Invalid(Vec<FieldError>),
    #[error("conflict: {0}")]
    Conflict(String),
    #[error("engine error: {0}")]
    Engine(String),
    #[error("storage error: {0}")]
    Storage(String),
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> SessionError {
    SessionError::Invalid(vec![FieldError {
        field: field.into(),
        message: message.into(),
    }])
}

/// Every mutation, in order. `Created` and `Submitted` are inputs; the
/// others record what the engine produced and are checked on replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Created {
        id: String,
        request: CreateSession,
    },
    Submitted {
        answers: Vec<Answer>,
        observations: Vec<ObservationInput>,
    },
    Suggested {
        t: usize,
        design: Vec<f64>,
    },
    Finished {
        observations: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Outcome {
    Winner(Side),
    Skipped,
}

#[derive(Debug, Clone)]
struct QueryState {
    query: Query,
    /// Design index that opened this batch; 0 for the initial batch.
    stage: usize,
    outcome: Option<Outcome>,
}

#[derive(Debug, Clone)]
pub struct SessionCore {
    id: String,
    request: CreateSession,
    engine: Engine,
    designs: Vec<Vec<f64>>,
    measured: Vec<Option<(f64, Option<f64>)>>,
    queries: Vec<QueryState>,
    finished: bool,
    events: Vec<Event>,
}

fn validate(req: &CreateSession) -> Vec<FieldError> {
    let mut errs = Vec::new();
    let mut push = |field: String, message: &str| {
        errs.push(FieldError {
            field,
            message: message.into(),
        })
    };
    if req.name.trim().is_empty() {
        push("name".into(), "must not be empty");
    }
    if req.design.is_empty() {
        push("design".into(), "needs at least one variable");
    }
    let mut names = HashSet::new();
    for (i, v) in req.design.iter().enumerate() {
        if v.name.trim().is_empty() {
            push(format!("design[{i}].name"), "must not be empty");
        } else if !names.insert(v.name.as_str()) {
            push(format!("design[{i}].name"), "duplicate variable name");
        }
        if !(v.lower.is_finite() && v.upper.is_finite() && v.lower < v.upper) {
            push(format!("design[{i}].upper"), "bounds must be finite with lower < upper");
        }
    }
    let mut labels = HashSet::new();
    for (i, p) in req.properties.iter().enumerate() {
        if p.trim().is_empty() {
            push(format!("properties[{i}]"), "must not be empty");
        } else if !labels.insert(p.as_str()) {
            push(format!("properties[{i}]"), "duplicate property label");
        }
    }
    if req.method.mode().uses_properties() && req.properties.is_empty() {
        push("properties".into(), "this method needs at least one property");
    }
    if req.true_max.is_some_and(|v| !v.is_finite()) {
        push("true_max".into(), "must be finite");
    }
    if let Some(pool) = &req.pool {
        for (r, row) in pool.iter().enumerate() {
            let inside = row.len() == req.design.len()
                && row
                    .iter()
                    .zip(&req.design)
                    .all(|(x, v)| x.is_finite() && *x >= v.lower && *x <= v.upper);
            if !inside {
                push(
                    format!("pool[{r}]"),
                    "row must have one in-bounds value per design variable",
                );
            }
        }
    }
    if req.initial == Some(0) {
        push("initial".into(), "must be at least 1");
    }
    if req.grid_per_dim == Some(0) {
        push("grid_per_dim".into(), "must be at least 1");
    }
    if req.holdout_fraction.is_some_and(|f| !(f > 0.0 && f < 1.0)) {
        push("holdout_fraction".into(), "must lie in (0, 1)");
    }
    errs
}

fn loop_config(req: &CreateSession) -> LoopConfig {
    let (dim, m, mode) = (req.design.len(), req.properties.len(), req.method.mode());
    let mut cfg = match req.pool {
        Some(_) => LoopConfig::dataset(dim, m, req.seed, mode),
        None => LoopConfig::synthetic(dim, m, req.seed, mode),
    };
    if let Some(v) = req.initial {
        cfg.initial = v;
    }
    if let Some(v) = req.budget {
        cfg.budget = v;
    }
    if let Some(v) = req.grid_per_dim {
        cfg.grid_per_dim = v;
    }
    if let Some(v) = req.holdout_fraction {
        cfg.holdout_fraction = v;
    }
    cfg
}

impl SessionCore {
    pub fn create(id: String, request: CreateSession) -> Result<Self, SessionError> {
        let errs = validate(&request);
        if !errs.is_empty() {
            return Err(SessionError::Invalid(errs));
        }
        let config = loop_config(&request);
        config.validate().map_err(|e| invalid("budget", e.to_string()))?;
        if let Some(pool) = &request.pool {
            if pool.len() < config.initial {
                return Err(invalid("pool", format!("needs at least {} rows", config.initial)));
            }
        }
        let space = SearchSpace::new(
            request.design.iter().map(|v| v.lower).collect(),
            request.design.iter().map(|v| v.upper).collect(),
        )
        .map_err(|e| invalid("design", e.to_string()))?;
        let info = ProblemInfo {
            name: request.name.clone(),
            method: request.method.id().to_string(),
            space,
            pool: request.pool.clone(),
            property_labels: request.properties.clone(),
            true_max: request.true_max,
        };
        let engine = Engine::new(config, info).map_err(|e| SessionError::Engine(e.to_string()))?;
        let designs = engine.initial_designs();
        let n = designs.len();
        let mut core = Self {
            events: vec![Event::Created {
                id: id.clone(),
                request: request.clone(),
            }],
            id,
            request,
            engine,
            measured: vec![None; n],
            designs,
            queries: Vec::new(),
            finished: false,
        };
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        core.enqueue(0, &pairs);
        Ok(core)
    }

    /// Rebuilds a session from its event log, checking that every recorded
    /// engine output is reproduced.
    pub fn replay(events: &[Event]) -> Result<Self, SessionError> {
        let Some(Event::Created { id, request }) = events.first() else {
            return Err(SessionError::Storage(
                "event log must start with a created event".into(),
            ));
        };
        let mut core = Self::create(id.clone(), request.clone())?;
        for e in &events[1..] {
            if let Event::Submitted { answers, observations } = e {
                core.submit(SubmitAnswers {
                    answers: answers.clone(),
                    observations: observations.clone(),
                })?;
            }
        }
        if core.events != events {
            return Err(SessionError::Storage("event log diverges from its replay".into()));
        }
        Ok(core)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    fn enqueue(&mut self, stage: usize, pairs: &[(usize, usize)]) {
        let labels: Vec<String> = self
            .engine
            .preference_sets()
            .iter()
            .map(|s| s.property_id().to_string())
            .collect();
        for (p, label) in labels.into_iter().enumerate() {
            for &(a, b) in pairs {
                let query = Query {
                    id: format!("q{}", self.queries.len()),
                    property: p,
                    property_label: label.clone(),
                    left: DesignRef {
                        index: a,
                        design: self.designs[a].clone(),
                    },
                    right: DesignRef {
                        index: b,
                        design: self.designs[b].clone(),
                    },
                };
                self.queries.push(QueryState {
                    query,
                    stage,
                    outcome: None,
                });
            }
        }
    }

    fn pending_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.measured
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_none())
            .map(|(i, _)| i)
    }

    fn has_open_queries(&self) -> bool {
        self.queries.iter().any(|q| q.outcome.is_none())
    }

    pub fn phase(&self) -> Phase {
        if self.finished {
            Phase::Finished
        } else if self.pending_indices().next().is_some() {
            Phase::AwaitingObservation
        } else if self.has_open_queries() {
            Phase::AwaitingPreferences
        } else {
            Phase::Suggesting
        }
    }

    /// Validates and records a submission without running the engine.
    /// Nothing changes when an error is returned.
    pub fn apply(&mut self, req: SubmitAnswers) -> Result<(), SessionError> {
        if self.finished {
            return Err(SessionError::Conflict("session is finished".into()));
        }
        if req.answers.is_empty() && req.observations.is_empty() {
            return Err(invalid("answers", "submission is empty"));
        }
        let mut seen = HashSet::new();
        let mut updates = Vec::with_capacity(req.answers.len());
        for (i, a) in req.answers.iter().enumerate() {
            let outcome = match (a.winner, a.cannot_judge) {
                (Some(side), false) => Outcome::Winner(side),
                (None, true) => Outcome::Skipped,
                _ => {
                    return Err(invalid(
                        format!("answers[{i}]"),
                        "give exactly one of winner or cannot_judge",
                    ))
                }
            };
            let pos = a
                .query_id
                .strip_prefix('q')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&k| k < self.queries.len() && self.queries[k].query.id == a.query_id)
                .ok_or_else(|| SessionError::Conflict(format!("unknown query {}", a.query_id)))?;
            if self.queries[pos].outcome.is_some() || !seen.insert(pos) {
                return Err(SessionError::Conflict(format!(
                    "query {} is already answered",
                    a.query_id
                )));
            }
            updates.push((pos, outcome));
        }
        let mut obs = Vec::with_capacity(req.observations.len());
        let mut seen = HashSet::new();
        for (i, o) in req.observations.iter().enumerate() {
            let idx =
                o.id.strip_prefix("obs")
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&k| k < self.measured.len() && format!("obs{k}") == o.id)
                    .ok_or_else(|| SessionError::Conflict(format!("unknown observation {}", o.id)))?;
            if self.measured[idx].is_some() || !seen.insert(idx) {
                return Err(SessionError::Conflict(format!(
                    "observation {} is already recorded",
                    o.id
                )));
            }
            if !o.y.is_finite() {
                return Err(invalid(format!("observations[{i}].y"), "must be finite"));
            }
            if o.value.is_some_and(|v| !v.is_finite()) {
                return Err(invalid(format!("observations[{i}].value"), "must be finite"));
            }
            obs.push((idx, (o.y, o.value)));
        }
        for (pos, outcome) in updates {
            self.queries[pos].outcome = Some(outcome);
        }
        for (idx, m) in obs {
            self.measured[idx] = Some(m);
        }
        self.events.push(Event::Submitted {
            answers: req.answers,
            observations: req.observations,
        });
        Ok(())
    }

    fn preferences(&self, stage: usize) -> Vec<Vec<PreferencePair>> {
        let mut out = vec![Vec::new(); self.engine.num_properties()];
        for q in self.queries.iter().filter(|q| q.stage == stage) {
            let (l, r) = (q.query.left.index, q.query.right.index);
            match q.outcome {
                Some(Outcome::Winner(Side::Left)) => out[q.query.property].push(PreferencePair::new(l, r)),
                Some(Outcome::Winner(Side::Right)) => out[q.query.property].push(PreferencePair::new(r, l)),
                _ => {}
            }
        }
        out
    }

    /// Runs engine steps until the session needs the human again.
    pub fn advance(&mut self) -> Result<(), SessionError> {
        let engine_err = |e: boap_core::BoapError| SessionError::Engine(e.to_string());
        while self.phase() == Phase::Suggesting {
            if !self.engine.started() {
                let initial = self
                    .designs
                    .iter()
                    .zip(&self.measured)
                    .map(|(d, m)| {
                        let (y, value) = m.expect("all initial designs measured");
                        (d.clone(), y, value)
                    })
                    .collect();
                self.engine.begin(initial, &self.preferences(0)).map_err(engine_err)?;
            } else {
                let last = self.designs.len() - 1;
                let (y, value) = self.measured[last].expect("suggestion measured");
                self.engine
                    .complete(y, value, &self.preferences(last))
                    .map_err(engine_err)?;
            }
            if self.engine.is_finished() {
                self.finished = true;
                self.events.push(Event::Finished {
                    observations: self.engine.observations().len(),
                });
                break;
            }
            let s = self.engine.suggest().map_err(engine_err)?;
            self.designs.push(s.design.clone());
            self.measured.push(None);
            let new = self.designs.len() - 1;
            let pairs: Vec<(usize, usize)> = (0..new).map(|j| (new, j)).collect();
            self.enqueue(new, &pairs);
            self.events.push(Event::Suggested {
                t: s.t,
                design: s.design,
            });
        }
        Ok(())
    }

    pub fn submit(&mut self, req: SubmitAnswers) -> Result<(), SessionError> {
        self.apply(req)?;
        self.advance()
    }

    pub fn view(&self) -> SessionView {
        let closed = self.queries.iter().filter_map(|q| q.outcome);
        let skipped = closed.clone().filter(|o| *o == Outcome::Skipped).count();
        SessionView {
            id: self.id.clone(),
            name: self.request.name.clone(),
            method: self.request.method,
            phase: self.phase(),
            observations: self.engine.observations().len(),
            budget: self.engine.config().budget,
            design: self.request.design.clone(),
            properties: self
                .engine
                .preference_sets()
                .iter()
                .map(|s| s.property_id().to_string())
                .collect(),
            pending_observations: self
                .pending_indices()
                .map(|i| PendingObservation {
                    id: format!("obs{i}"),
                    index: i,
                    design: self.designs[i].clone(),
                })
                .collect(),
            open_queries: self
                .queries
                .iter()
                .filter(|q| q.outcome.is_none())
                .map(|q| q.query.clone())
                .collect(),
            answered_queries: closed.count() - skipped,
            skipped_queries: skipped,
            trace: self.engine.trace().clone(),
        }
    }
}
