use std::time::Instant;

use rayon::prelude::*;

use super::{CaseStatus, Design, Engine, ExperimentConfig, ExperimentError};
use crate::formula::Formula;
use crate::prover::{min_proof_bfs, resolution_prove, ProverOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Proved,
    /// Skipped because the truth tables reject the case.
    Unprovable,
    Budget,
}

impl Outcome {
    pub fn token(self) -> &'static str {
        match self {
            Outcome::Proved => "proved",
            Outcome::Unprovable => "unprovable",
            Outcome::Budget => "budget",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "proved" => Some(Outcome::Proved),
            "unprovable" => Some(Outcome::Unprovable),
            "budget" => Some(Outcome::Budget),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseResult {
    pub column: usize,
    pub row: usize,
    pub outcome: Outcome,
    /// Proof length `D` when proved.
    pub length: Option<usize>,
    pub states: usize,
    /// Wall-clock time, only when timing was requested.
    pub millis: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
    /// Record wall-clock time per case. Off by default so outputs stay
    /// byte-identical across reruns.
    pub timing: bool,
}

/// Runs the configured engine on one case.
pub fn prove(config: &ExperimentConfig, t: &[Formula], goal: &Formula) -> ProverOutcome {
    match config.engine {
        Engine::Exact => min_proof_bfs(t, goal, config.mode, &config.budget),
        Engine::Resolution => resolution_prove(t, goal, &config.budget),
    }
}

/// Proves every pending case in parallel. Results come back in case order
/// whatever the scheduling.
pub fn run_cases(design: &Design, options: &RunOptions) -> Result<Vec<CaseResult>, ExperimentError> {
    let run_one = |case: &super::Case| {
        let mut result = CaseResult {
            column: case.column,
            row: case.row,
            outcome: Outcome::Unprovable,
            length: None,
            states: 0,
            millis: None,
        };
        if case.status == CaseStatus::SkippedUnprovable {
            return result;
        }
        let start = Instant::now();
        let out = prove(&design.config, design.theory(case.column).formulas(), design.objective(case.row));
        if options.timing {
            result.millis = Some(start.elapsed().as_millis() as u64);
        }
        result.states = out.states();
        match out {
            ProverOutcome::Proved { length, .. } => {
                result.outcome = Outcome::Proved;
                result.length = Some(length.get());
            }
            ProverOutcome::NotEntailed { .. } => {}
            ProverOutcome::BudgetExhausted(_) => result.outcome = Outcome::Budget,
        }
        result
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = options.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| ExperimentError::Config(e.to_string()))?;
    Ok(pool.install(|| design.cases.par_iter().map(run_one).collect()))
}
