//! Proof construction steered by a speed-up oracle.
//!
//! The partial proof built so far is treated as a theory whose lines are
//! free: the oracle compares the number of lines still needed to reach the
//! goal before and after one more move. A candidate move is flagged positive
//! when it strictly shortens the remainder; among positive candidates the one
//! kept is chosen by pairwise oracle comparisons.

use std::collections::HashMap;
use std::iter;

use num_rational::Rational64;
use thiserror::Error;

use super::exact::{bfs, build_proof, input_depth, BfsEnd, Id, Limits, Search, State, Step, Universe};
use super::proof::{check_proof, Claim, Proof, Rule};
use super::{delta, DeductionMode, Exhaustion, ProofLength, ProverBudget};
use crate::formula::{entails, Formula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuidedDerivation {
    /// Non-premise lines of the final proof, in order.
    pub derivation: Vec<Claim>,
    pub proof: Proof,
    pub length: ProofLength,
    pub oracle_calls: usize,
    pub states: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GuidedError {
    #[error("the goal is not entailed")]
    NotEntailed,
    #[error("oracle stopped by {reason} after {calls} calls")]
    Budget { reason: Exhaustion, calls: usize },
    #[error("no candidate line shortens the remaining proof after {written} lines")]
    NoPositiveCandidate { written: usize },
}

struct Oracle<'a> {
    search: Search<'a>,
    budget: &'a ProverBudget,
    /// Exact remaining cost, or a strict lower bound when the search was cut short.
    memo: HashMap<Vec<Id>, Result<usize, usize>>,
    calls: usize,
    states: usize,
}

impl Oracle<'_> {
    /// Remaining lines from `s`, searched up to `bound`; `Ok(None)` when more are needed.
    fn residual(&mut self, s: &State, bound: usize) -> Result<Option<usize>, GuidedError> {
        let key = s.encode();
        match self.memo.get(&key) {
            Some(Ok(r)) => return Ok((*r <= bound).then_some(*r)),
            Some(Err(lower)) if *lower > bound => return Ok(None),
            _ => {}
        }
        self.calls += 1;
        let limits = Limits {
            max_cost: bound,
            max_states: self.budget.max_states,
            deadline: None,
        };
        let report = bfs(&self.search, s, &limits);
        self.states += report.states;
        match report.end {
            BfsEnd::Found { cost, .. } => {
                self.memo.insert(key, Ok(cost));
                Ok(Some(cost))
            }
            BfsEnd::Stopped {
                reason: Exhaustion::Lines | Exhaustion::SearchSpace,
                ..
            } => {
                self.memo.insert(key, Err(bound + 1));
                Ok(None)
            }
            BfsEnd::Stopped { reason, .. } => Err(GuidedError::Budget {
                reason,
                calls: self.calls,
            }),
        }
    }

    /// `δ(from, to) = 1 - (1 + residual(to)) / (1 + residual(from))`, where
    /// `residual(from)` is known to be `base`.
    fn delta(&mut self, base: usize, to: &State) -> Result<(Rational64, Option<usize>), GuidedError> {
        let r = self.residual(to, base.saturating_sub(1))?;
        let b = r.unwrap_or(base) as i64;
        Ok((Rational64::from_integer(1) - Rational64::new(1 + b, 1 + base as i64), r))
    }
}

/// Builds a proof of `goal` one move at a time, keeping at each round a
/// candidate the oracle flags as a positive speed-up.
///
/// A candidate is positive when, with the lines written so far taken as
/// free, it strictly shortens what remains. Positive candidates are compared
/// pairwise by the length of the whole proof through them. The oracle is
/// exact, so the resulting length equals the minimal one.
pub fn oracle_guided_search(
    t: &[Formula],
    goal: &Formula,
    mode: DeductionMode,
    budget: &ProverBudget,
) -> Result<GuidedDerivation, GuidedError> {
    if !entails(t, goal) {
        return Err(GuidedError::NotEntailed);
    }
    let cap = budget.max_depth.unwrap_or(input_depth(t, goal) + 2);
    let inputs: Vec<&Formula> = t.iter().chain(iter::once(goal)).collect();
    let u = Universe::new(&inputs, cap, mode).ok_or(GuidedError::Budget {
        reason: Exhaustion::States,
        calls: 0,
    })?;
    let mut oracle = Oracle {
        search: Search::new(&u, t, goal),
        budget,
        memo: HashMap::new(),
        calls: 0,
        states: 0,
    };
    let mut state = oracle.search.start();
    let mut steps: Vec<Step> = Vec::new();
    let mut written = 0;
    let mut remaining = oracle
        .residual(&state, budget.max_lines)?
        .ok_or(GuidedError::Budget {
            reason: Exhaustion::Lines,
            calls: oracle.calls,
        })?;
    let mut options = Vec::new();
    while !oracle.search.is_goal(&state) {
        options.clear();
        oracle.search.expand(&state, &mut options);
        let mut best: Option<(usize, usize, usize)> = None;
        for (k, mv) in options.iter().enumerate() {
            let (d, rest) = oracle.delta(remaining, &mv.state)?;
            let Some(rest) = rest.filter(|_| d > Rational64::from_integer(0)) else {
                continue;
            };
            let through = mv.cost() as usize + rest;
            let better = match best {
                None => true,
                Some((_, held, _)) => delta(length(held), length(through)) > Rational64::from_integer(0),
            };
            if better {
                best = Some((k, through, rest));
            }
        }
        let Some((k, _, rest)) = best else {
            return Err(GuidedError::NoPositiveCandidate { written });
        };
        let mv = options.swap_remove(k);
        written += mv.cost() as usize;
        steps.extend(mv.steps);
        remaining = rest;
        state = mv.state;
    }
    let proof = build_proof(&u, &steps);
    if let Err(e) = check_proof(&proof, t, goal, mode) {
        panic!("guided search produced an invalid proof ({e}):\n{proof}");
    }
    let derivation = proof
        .lines
        .iter()
        .filter(|l| l.rule != Rule::Premise)
        .map(|l| l.claim.clone())
        .collect();
    Ok(GuidedDerivation {
        derivation,
        length: ProofLength::new(proof.len()).unwrap(),
        proof,
        oracle_calls: oracle.calls,
        states: oracle.states,
    })
}

fn length(lines: usize) -> ProofLength {
    ProofLength::new(lines.max(1)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::prover::min_proof_bfs;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn modus_ponens_matches_exact_length() {
        let t = [f("p1"), f("p1 -> p2")];
        let g = oracle_guided_search(&t, &f("p2"), DeductionMode::Classical, &ProverBudget::default()).unwrap();
        assert_eq!(g.length.get(), 3);
        assert_eq!(g.derivation, vec![Claim::Formula(f("p2"))]);
    }

    #[test]
    fn goal_in_theory_needs_no_derivation() {
        let t = [f("p1 & p2"), f("p2")];
        let g = oracle_guided_search(&t, &f("p2"), DeductionMode::Classical, &ProverBudget::default()).unwrap();
        assert!(g.derivation.is_empty());
        assert_eq!(g.length.get(), 1);
    }

    #[test]
    fn agrees_with_exact_prover() {
        let cases = [
            (vec!["p1 | p2", "~p2"], "p1"),
            (vec!["p1 <-> p2", "p2"], "p1 & p2"),
            (vec!["p1 -> p2", "p2 -> p1"], "p1 <-> p2"),
        ];
        for (t, goal) in cases {
            let t: Vec<Formula> = t.iter().map(|s| f(s)).collect();
            let budget = ProverBudget::default();
            let exact = min_proof_bfs(&t, &f(goal), DeductionMode::Classical, &budget).length().unwrap();
            let g = oracle_guided_search(&t, &f(goal), DeductionMode::Classical, &budget).unwrap();
            assert_eq!(g.length, exact, "{goal}");
        }
    }

    #[test]
    fn refuses_non_entailed_goals() {
        let r = oracle_guided_search(&[f("p1")], &f("p2"), DeductionMode::Classical, &ProverBudget::default());
        assert_eq!(r, Err(GuidedError::NotEntailed));
    }
}
