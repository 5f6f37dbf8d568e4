//! Theory families, case grids, prover runs, speed-up matrices and audits.

mod audit;
mod csv;
mod matrix;
mod run;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{entails, Formula, GenerationParams};
use crate::prover::{DeductionMode, ProverBudget};
use crate::theory::{sample_objectives, sample_theories, ObjectiveSample, SampleSpec, Theory, TheoryError, TheoryRole};

pub use audit::{audit, AuditCounts, EpsilonRow, NormalityAudit, Verdict, Witness, WitnessKind};
pub use csv::{read_matrix, read_results, write_matrix, write_results, CsvError};
pub use matrix::{incidence, speedup_matrix, Cell, Entry, Incidence, IncidenceMatrix, Layout, SpeedupMatrix, Trivial, Undefined};
pub use run::{prove, run_cases, CaseResult, Outcome, RunOptions};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Minimal natural deduction proofs by breadth-first search.
    #[default]
    Exact,
    /// Given-clause binary resolution.
    Resolution,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Exact => "exact",
            Engine::Resolution => "resolution",
        })
    }
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Engine::Exact),
            "resolution" => Ok(Engine::Resolution),
            other => Err(format!("unknown engine `{other}`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error("results do not match the case grid: {0}")]
    Mismatch(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub params: GenerationParams,
    /// Base theory size.
    pub j: usize,
    /// Number of base theories.
    pub x: usize,
    /// Number of objective candidates.
    pub o: usize,
    /// Derived theories per base, each adding one more objective.
    pub derived_prefixes: usize,
    pub mode: DeductionMode,
    pub engine: Engine,
    pub budget: ProverBudget,
    pub seed: u64,
    pub attempts_per_theory: usize,
}

impl ExperimentConfig {
    /// A configuration with `derived_prefixes = o` and default prover settings.
    pub fn new(params: GenerationParams, j: usize, x: usize, o: usize, seed: u64) -> Self {
        ExperimentConfig {
            params,
            j,
            x,
            o,
            derived_prefixes: o,
            mode: DeductionMode::default(),
            engine: Engine::default(),
            budget: ProverBudget::default(),
            seed,
            attempts_per_theory: SampleSpec::new(j, x, o, seed).attempts_per_theory,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let fail = |m: &str| Err(ExperimentError::Config(m.to_string()));
        if self.j == 0 || self.x == 0 || self.o == 0 {
            return fail("j, x and o must be positive");
        }
        if self.derived_prefixes > self.o {
            return fail("derived_prefixes must not exceed o");
        }
        if self.budget.max_states == 0 || self.budget.max_lines == 0 {
            return fail("prover budgets must be positive");
        }
        if self.attempts_per_theory == 0 {
            return fail("attempts_per_theory must be positive");
        }
        Ok(())
    }

    pub fn sample_spec(&self) -> SampleSpec {
        SampleSpec {
            attempts_per_theory: self.attempts_per_theory,
            ..SampleSpec::new(self.j, self.x, self.o, self.seed)
        }
    }
}

/// A base theory and its extensions by growing objective prefixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryFamily {
    pub base: Theory,
    /// `derived[q - 1] = base ∪ {o_1, …, o_q}`.
    pub derived: Vec<Theory>,
}

impl TheoryFamily {
    /// The member with the given prefix length; 0 is the base.
    pub fn member(&self, prefix: usize) -> &Theory {
        match prefix {
            0 => &self.base,
            q => &self.derived[q - 1],
        }
    }

    pub fn len(&self) -> usize {
        1 + self.derived.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Column {
    pub family: usize,
    /// Number of objectives added to the base; 0 for the base itself.
    pub prefix: usize,
    /// Number of formulas in the column's theory.
    pub size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseStatus {
    Pending,
    /// The theory does not entail the objective.
    SkippedUnprovable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Case {
    pub column: usize,
    pub row: usize,
    pub status: CaseStatus,
}

/// Everything sampled for one experiment, with the full case grid.
#[derive(Clone, Debug)]
pub struct Design {
    pub config: ExperimentConfig,
    pub families: Vec<TheoryFamily>,
    pub objectives: ObjectiveSample,
    /// Grouped by family: base first, then derived by prefix.
    pub columns: Vec<Column>,
    /// Column-major over `columns` and objective rows.
    pub cases: Vec<Case>,
}

impl Design {
    pub fn theory(&self, column: usize) -> &Theory {
        let c = self.columns[column];
        self.families[c.family].member(c.prefix)
    }

    pub fn objective(&self, row: usize) -> &Formula {
        &self.objectives.formulas[row]
    }

    pub fn rows(&self) -> usize {
        self.objectives.len()
    }

    pub fn layout(&self) -> Layout {
        let first_containing = self
            .families
            .iter()
            .map(|fam| {
                (0..self.rows())
                    .map(|r| (0..fam.len()).find(|&q| fam.member(q).contains(self.objective(r))))
                    .collect()
            })
            .collect();
        Layout {
            columns: self.columns.clone(),
            rows: self.rows(),
            first_containing,
        }
    }
}

/// Samples base theories and objectives, builds the families and marks every
/// case the truth tables reject.
pub fn build_cases(config: &ExperimentConfig) -> Result<Design, ExperimentError> {
    config.validate()?;
    let spec = config.sample_spec();
    let bases = sample_theories(&config.params, &spec)?;
    let objectives = sample_objectives(&config.params, &spec)?;
    let prefixes = config.derived_prefixes.min(objectives.len());
    let mut families = Vec::with_capacity(bases.theories.len());
    for (f, base) in bases.theories.into_iter().enumerate() {
        let derived = (1..=prefixes)
            .map(|q| base.extended(&objectives.indices[..q], TheoryRole::Derived { base: f, prefix: q }))
            .collect::<Result<Vec<_>, _>>()?;
        families.push(TheoryFamily { base, derived });
    }
    let mut columns = Vec::new();
    for (f, fam) in families.iter().enumerate() {
        for q in 0..fam.len() {
            columns.push(Column {
                family: f,
                prefix: q,
                size: fam.member(q).len(),
            });
        }
    }
    let mut cases = Vec::with_capacity(columns.len() * objectives.len());
    for (i, c) in columns.iter().enumerate() {
        let t = families[c.family].member(c.prefix);
        for (r, goal) in objectives.formulas.iter().enumerate() {
            let status = if entails(t.formulas(), goal) {
                CaseStatus::Pending
            } else {
                CaseStatus::SkippedUnprovable
            };
            cases.push(Case { column: i, row: r, status });
        }
    }
    Ok(Design {
        config: config.clone(),
        families,
        objectives,
        columns,
        cases,
    })
}
