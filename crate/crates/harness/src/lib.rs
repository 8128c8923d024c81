//! Experiment harness: configs, seeded repeats across methods, regret
//! aggregation and reference fixtures.

pub mod config;
pub mod experiment;
pub mod fixtures;
pub mod summary;

pub use config::{ExperimentConfig, ProblemSpec};
pub use experiment::{run_all, write_outputs, RunOutput, RunRecord};
pub use summary::{summarize, write_summary, Summary};
