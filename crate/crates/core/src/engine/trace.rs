//! Run trace records, serialized one JSON object per line.

use serde::{Deserialize, Serialize};

use crate::engine::config::EngineMode;
use crate::error::{BoapError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arm {
    Control,
    Human,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub problem: String,
    pub method: String,
    pub mode: EngineMode,
    pub seed: u64,
    pub dim: usize,
    pub initial: usize,
    pub budget: usize,
    pub property_labels: Vec<String>,
    pub signal_variance: f64,
    pub noise_variance: f64,
    pub pref_noise: f64,
    pub holdout_fraction: f64,
    pub grid_size: usize,
    pub true_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialRecord {
    pub t: usize,
    pub designs: Vec<Vec<f64>>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
    pub preference_counts: Vec<usize>,
    pub incumbent: f64,
    pub best_value: f64,
    pub simple_regret: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmReport {
    pub predictive_likelihood: Option<f64>,
    pub lengthscales: Vec<f64>,
    pub alpha: Option<f64>,
    /// Hyperparameter search produced no valid candidate.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub lengthscales: Vec<f64>,
    pub log_likelihood: f64,
    pub converged: bool,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub arm: Arm,
    pub design: Vec<f64>,
    pub y: f64,
    pub value: f64,
    pub incumbent: f64,
    pub best_value: f64,
    pub simple_regret: Option<f64>,
    pub control: Option<ArmReport>,
    pub human: Option<ArmReport>,
    pub rank: Vec<RankReport>,
    pub human_flagged: bool,
    pub preference_counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub best_design: Vec<f64>,
    pub best_y: f64,
    pub best_value: f64,
    pub final_regret: Option<f64>,
    pub human_steps: usize,
    pub control_steps: usize,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceRecord {
    Header(TraceHeader),
    Initial(InitialRecord),
    Step(StepRecord),
    Summary(TraceSummary),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunTrace {
    pub header: Option<TraceHeader>,
    pub initial: Option<InitialRecord>,
    pub steps: Vec<StepRecord>,
    pub summary: Option<TraceSummary>,
}

impl RunTrace {
    pub fn records(&self) -> Vec<TraceRecord> {
        let mut out = Vec::with_capacity(self.steps.len() + 3);
        out.extend(self.header.clone().map(TraceRecord::Header));
        out.extend(self.initial.clone().map(TraceRecord::Initial));
        out.extend(self.steps.iter().cloned().map(TraceRecord::Step));
        out.extend(self.summary.clone().map(TraceRecord::Summary));
        out
    }

    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for r in self.records() {
            s.push_str(&serde_json::to_string(&r).expect("trace records serialize"));
            s.push('\n');
        }
        s
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut trace = RunTrace::default();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let rec: TraceRecord = serde_json::from_str(line)
                .map_err(|e| BoapError::InvalidArgument(format!("trace line {}: {e}", i + 1)))?;
            match rec {
                TraceRecord::Header(h) => trace.header = Some(h),
                TraceRecord::Initial(r) => trace.initial = Some(r),
                TraceRecord::Step(s) => trace.steps.push(s),
                TraceRecord::Summary(s) => trace.summary = Some(s),
            }
        }
        Ok(trace)
    }

    /// Simple regret after the initial designs and after every step.
    pub fn regret_curve(&self) -> Option<Vec<f64>> {
        let mut out = vec![self.initial.as_ref()?.simple_regret?];
        for s in &self.steps {
            out.push(s.simple_regret?);
        }
        Some(out)
    }

    pub fn final_regret(&self) -> Option<f64> {
        self.regret_curve().and_then(|c| c.last().copied())
    }

    pub fn arms(&self) -> Vec<Arm> {
        self.steps.iter().map(|s| s.arm).collect()
    }
}
