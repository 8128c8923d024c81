//! Closed-loop runs against a simulated expert.

use std::fmt;

use super::{Engine, LoopConfig, Method, ProblemInfo, RunTrace};
use crate::error::BoapError;
use crate::oracles::{ObservationNoise, Problem, SimulatedExpert, Winner};
use crate::rank_gp::PreferencePair;

/// A run that stopped early, with everything recorded up to the failure.
#[derive(Debug)]
pub struct RunFailure {
    pub trace: RunTrace,
    pub error: BoapError,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps = self.trace.steps.len();
        write!(f, "run failed after {steps} steps: {}", self.error)
    }
}

impl std::error::Error for RunFailure {}

/// Asks the expert about every pair `(new, j)` for `j` in `against`, one
/// property at a time.
fn ask(
    expert: &mut SimulatedExpert,
    problem: &dyn Problem,
    designs: &[Vec<f64>],
    pairs: &[(usize, usize)],
    num_properties: usize,
) -> Result<Vec<Vec<PreferencePair>>, BoapError> {
    (0..num_properties)
        .map(|p| {
            pairs
                .iter()
                .map(|&(a, b)| {
                    Ok(match expert.compare(problem, p, &designs[a], &designs[b])? {
                        Winner::First => PreferencePair::new(a, b),
                        Winner::Second => PreferencePair::new(b, a),
                    })
                })
                .collect()
        })
        .collect()
}

/// Runs the loop to its budget. Preferences are only collected when the
/// engine mode models properties.
pub fn run(
    config: LoopConfig,
    problem: &dyn Problem,
    method: &str,
    expert: &mut SimulatedExpert,
    noise: &mut ObservationNoise,
) -> Result<RunTrace, RunFailure> {
    let mut engine = match Engine::new(config, ProblemInfo::from_problem(problem, method)) {
        Ok(e) => e,
        Err(error) => {
            return Err(RunFailure {
                trace: RunTrace::default(),
                error,
            })
        }
    };
    match drive(&mut engine, problem, expert, noise) {
        Ok(()) => Ok(engine.into_trace()),
        Err(error) => Err(RunFailure {
            trace: engine.into_trace(),
            error,
        }),
    }
}

fn drive(
    engine: &mut Engine,
    problem: &dyn Problem,
    expert: &mut SimulatedExpert,
    noise: &mut ObservationNoise,
) -> Result<(), BoapError> {
    let m = engine.num_properties();
    let designs = engine.initial_designs();
    let mut initial = Vec::with_capacity(designs.len());
    for d in &designs {
        let (y, exact) = noise.evaluate(problem, d)?;
        initial.push((d.clone(), y, Some(exact)));
    }
    let n = designs.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let prefs = if m > 0 {
        ask(expert, problem, &designs, &pairs, m)?
    } else {
        Vec::new()
    };
    engine.begin(initial, &prefs)?;
    let mut designs = designs;

    while !engine.is_finished() {
        let s = engine.suggest()?;
        let (y, exact) = noise.evaluate(problem, &s.design)?;
        designs.push(s.design);
        let new = designs.len() - 1;
        let pairs: Vec<(usize, usize)> = (0..new).map(|j| (new, j)).collect();
        let prefs = if m > 0 {
            ask(expert, problem, &designs, &pairs, m)?
        } else {
            Vec::new()
        };
        engine.complete(y, Some(exact), &prefs)?;
    }
    Ok(())
}

/// Runs `method` on `problem` with the expert and noise streams derived
/// from `config.seed`. `delta` is the flip probability used by the
/// noisy-expert variant.
pub fn run_method(
    problem: &dyn Problem,
    method: Method,
    config: LoopConfig,
    delta: f64,
) -> Result<RunTrace, RunFailure> {
    let mut expert = SimulatedExpert::noisy(method.flip_prob(delta), config.seed);
    let mut noise = ObservationNoise::new(problem.evaluation_noise(), config.seed);
    run(config, problem, method.id(), &mut expert, &mut noise)
}
