//! Proof objects and the proving engines.

mod exact;
mod oracle;
mod proof;
mod resolution;

use std::fmt;
use std::time::Duration;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

pub use exact::min_proof_bfs;
pub use oracle::{oracle_guided_search, GuidedDerivation, GuidedError};
pub use proof::{check_proof, CheckError, Claim, Line, Proof, Reference, Rule};
pub use resolution::{check_refutation, clausify, resolution_prove, Clause, Origin, Refutation, RefutationStep};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeductionMode {
    #[default]
    Classical,
    /// Classical rules minus double negation elimination.
    Intuitionistic,
}

impl fmt::Display for DeductionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeductionMode::Classical => "classical",
            DeductionMode::Intuitionistic => "intuitionistic",
        })
    }
}

impl std::str::FromStr for DeductionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classical" => Ok(DeductionMode::Classical),
            "intuitionistic" => Ok(DeductionMode::Intuitionistic),
            other => Err(format!("unknown deduction mode `{other}`")),
        }
    }
}

/// Resource limits for one prover call.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProverBudget {
    /// Longest proof the search will consider.
    pub max_lines: usize,
    /// Cap on the depth of intermediate formulas. `None` uses the largest
    /// input depth plus two, where every negation and double negation of an
    /// input subformula is admitted.
    pub max_depth: Option<u32>,
    /// Distinct search states (or generated clauses) per search.
    pub max_states: usize,
    /// Wall-clock limit per search. Results depend on machine speed when set.
    #[serde(with = "millis", skip_serializing_if = "Option::is_none")]
    pub time_limit: Option<Duration>,
}

impl Default for ProverBudget {
    fn default() -> Self {
        ProverBudget {
            max_lines: 40,
            max_depth: None,
            max_states: 300_000,
            time_limit: None,
        }
    }
}

impl ProverBudget {
    pub fn with_states(max_states: usize) -> Self {
        ProverBudget {
            max_states,
            ..ProverBudget::default()
        }
    }
}

mod millis {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.serialize_u64(d.as_millis() as u64),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        Ok(Option::<u64>::deserialize(d)?.map(Duration::from_millis))
    }
}

/// Number of lines of a proof, premises included. Always at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProofLength(usize);

impl ProofLength {
    pub fn new(lines: usize) -> Option<Self> {
        (lines >= 1).then_some(ProofLength(lines))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for ProofLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `1 - aug / base`: the relative saving of proof lines.
pub fn delta(base: ProofLength, aug: ProofLength) -> Rational64 {
    Rational64::from_integer(1) - Rational64::new(aug.0 as i64, base.0 as i64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Fitch(Proof),
    Refutation(Refutation),
}

impl Certificate {
    pub fn lines(&self) -> usize {
        match self {
            Certificate::Fitch(p) => p.len(),
            Certificate::Refutation(r) => r.steps.len(),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Fitch(p) => write!(f, "{p}"),
            Certificate::Refutation(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exhaustion {
    States,
    Lines,
    Time,
    /// Every reachable state was explored without reaching the goal.
    SearchSpace,
}

impl fmt::Display for Exhaustion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exhaustion::States => "state limit",
            Exhaustion::Lines => "line limit",
            Exhaustion::Time => "time limit",
            Exhaustion::SearchSpace => "search space exhausted",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    pub reason: Exhaustion,
    /// States explored (or clauses generated).
    pub states: usize,
    /// Open states left when the search stopped.
    pub frontier: usize,
    /// Longest proof length fully explored.
    pub explored_lines: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProverOutcome {
    Proved {
        proof: Certificate,
        length: ProofLength,
        /// Set only by the exact engine once the depth-cap audit agrees.
        minimal: bool,
        states: usize,
    },
    NotEntailed {
        states: usize,
    },
    BudgetExhausted(Diagnostics),
}

impl ProverOutcome {
    pub fn length(&self) -> Option<ProofLength> {
        match self {
            ProverOutcome::Proved { length, .. } => Some(*length),
            _ => None,
        }
    }

    pub fn states(&self) -> usize {
        match self {
            ProverOutcome::Proved { states, .. } | ProverOutcome::NotEntailed { states } => *states,
            ProverOutcome::BudgetExhausted(d) => d.states,
        }
    }

    pub fn is_minimal(&self) -> bool {
        matches!(self, ProverOutcome::Proved { minimal: true, .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize) -> ProofLength {
        ProofLength::new(n).unwrap()
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(d(10), d(5)), Rational64::new(1, 2));
        assert_eq!(delta(d(7), d(7)), Rational64::from_integer(0));
        assert_eq!(delta(d(3), d(1)), Rational64::new(2, 3));
        assert_eq!(delta(d(4), d(6)), Rational64::new(-1, 2));
        assert!(ProofLength::new(0).is_none());
    }
}
