//! Bayesian optimization with abstract properties.
//!
//! Gaussian-process models over raw and property-augmented inputs,
//! preference (rank) GPs for expert comparisons, acquisition functions,
//! benchmark oracles and the two-arm optimization loop.

pub mod acquisition;
pub mod engine;
pub mod error;
pub mod gp;
pub mod hyperopt;
pub mod kernel;
pub mod linalg;
pub mod normal;
pub mod oracles;
pub mod rank_gp;
pub mod rng;
pub mod space;

pub use error::{BoapError, Result};
pub use space::SearchSpace;
