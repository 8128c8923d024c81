//! Seeded repeats of every configured method, persisted as trace files.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use boap_core::engine::{run_method, Method, RunTrace};
use boap_core::oracles::{load_dataset, DatasetOracle, DatasetSchema, Problem, SyntheticObjective};
use boap_core::SearchSpace;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ProblemSpec};

/// Outcome of one (method, repeat) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: Method,
    pub repeat: usize,
    pub seed: u64,
    /// Empty on success, otherwise the error that stopped the run.
    pub error: String,
}

impl RunRecord {
    pub fn ok(&self) -> bool {
        self.error.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub record: RunRecord,
    pub trace: RunTrace,
    pub seconds: f64,
}

pub fn trace_path(dir: &Path, method: Method, repeat: usize) -> PathBuf {
    dir.join("traces")
        .join(method.id())
        .join(format!("seed-{repeat}.jsonl"))
}

/// Builds the problem a method runs against. Synthetic problems carry the
/// method's feature set; datasets are shared.
pub struct ProblemFactory {
    spec: ProblemSpec,
    dataset: Option<DatasetOracle>,
}

impl ProblemFactory {
    pub fn new(spec: &ProblemSpec) -> Result<Self> {
        let dataset = match spec {
            ProblemSpec::Dataset { path, schema } => {
                let schema = DatasetSchema::load(schema).with_context(|| format!("schema {}", schema.display()))?;
                Some(load_dataset(path, &schema).with_context(|| format!("dataset {}", path.display()))?)
            }
            ProblemSpec::Synthetic { .. } => None,
        };
        Ok(Self {
            spec: spec.clone(),
            dataset,
        })
    }

    pub fn build(&self, method: Method) -> Result<Box<dyn Problem>> {
        match &self.spec {
            ProblemSpec::Synthetic {
                function,
                lower,
                upper,
                true_max,
                noise_variance,
            } => {
                let mut p = SyntheticObjective::new(*function, method.features());
                if let (Some(lo), Some(hi)) = (lower, upper) {
                    p = p.with_space(SearchSpace::new(lo.clone(), hi.clone())?);
                }
                if let Some(v) = true_max {
                    p = p.with_true_max(*v);
                }
                if let Some(v) = noise_variance {
                    p = p.with_noise(*v);
                }
                Ok(Box::new(p))
            }
            ProblemSpec::Dataset { .. } => Ok(Box::new(self.dataset.clone().expect("loaded in new"))),
        }
    }
}

/// Runs one method for one repeat.
pub fn run_one(
    cfg: &ExperimentConfig,
    factory: &ProblemFactory,
    method: Method,
    repeat: usize,
    seed: u64,
) -> Result<RunOutput> {
    let problem = factory.build(method)?;
    let loop_cfg = cfg.loop_config(problem.space().dim(), problem.num_properties(), seed, method);
    let start = Instant::now();
    let (trace, error) = match run_method(problem.as_ref(), method, loop_cfg, cfg.flip_prob) {
        Ok(t) => (t, String::new()),
        Err(f) => {
            let msg = f.error.to_string();
            (f.trace, msg)
        }
    };
    Ok(RunOutput {
        record: RunRecord {
            method,
            repeat,
            seed,
            error,
        },
        trace,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs every method × repeat on `jobs` threads. Outputs come back in
/// (method, repeat) order regardless of scheduling.
pub fn run_all(cfg: &ExperimentConfig, jobs: usize) -> Result<Vec<RunOutput>> {
    let factory = ProblemFactory::new(&cfg.problem)?;
    let seeds = cfg.repeat_seeds();
    let tasks: Vec<(Method, usize, u64)> = cfg
        .methods
        .iter()
        .flat_map(|&m| seeds.iter().enumerate().map(move |(k, &s)| (m, k, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    pool.install(|| {
        tasks
            .par_iter()
            .map(|&(m, k, s)| run_one(cfg, &factory, m, k, s))
            .collect::<Result<Vec<_>>>()
    })
}

/// Writes traces, `runs.csv` and `timing.csv`. Only `timing.csv` depends
/// on the machine.
pub fn write_outputs(dir: &Path, cfg: &ExperimentConfig, outputs: &[RunOutput]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("config.toml"), cfg.to_toml()?)?;
    for out in outputs {
        let path = trace_path(dir, out.record.method, out.record.repeat);
        std::fs::create_dir_all(path.parent().expect("trace path has a parent"))?;
        std::fs::write(&path, out.trace.to_jsonl())?;
    }
    let mut runs = csv::Writer::from_path(dir.join("runs.csv"))?;
    let mut timing = csv::Writer::from_path(dir.join("timing.csv"))?;
    timing.write_record(["method", "repeat", "seconds"])?;
    for out in outputs {
        runs.serialize(&out.record)?;
        timing.write_record([
            out.record.method.id().to_string(),
            out.record.repeat.to_string(),
            format!("{:.3}", out.seconds),
        ])?;
    }
    runs.flush()?;
    timing.flush()?;
    Ok(())
}

pub fn read_runs(dir: &Path) -> Result<Vec<RunRecord>> {
    let mut reader = csv::Reader::from_path(dir.join("runs.csv")).context("reading runs.csv")?;
    reader.deserialize().map(|r| r.map_err(Into::into)).collect()
}
