//! Propositional binary resolution with a given-clause loop.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::time::Instant;

use super::proof::CheckError;
use super::{Certificate, Diagnostics, Exhaustion, ProofLength, ProverBudget, ProverOutcome};
use crate::formula::{Connective, Formula};

/// A disjunction of literals `±v`, sorted and without repeats.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(Vec<i32>);

impl Clause {
    /// `None` for tautologies.
    pub fn new(mut lits: Vec<i32>) -> Option<Clause> {
        lits.sort_unstable();
        lits.dedup();
        if lits.iter().any(|l| lits.binary_search(&-l).is_ok()) {
            return None;
        }
        Some(Clause(lits))
    }

    pub fn literals(&self) -> &[i32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    fn subsumes(&self, other: &Clause) -> bool {
        self.0.iter().all(|l| other.0.binary_search(l).is_ok())
    }

    /// Resolvent on `pivot`, which must occur positively in one clause and
    /// negatively in the other.
    fn resolve(&self, other: &Clause, pivot: u32) -> Option<Clause> {
        let p = pivot as i32;
        let (pos, neg) = if self.0.contains(&p) && other.0.contains(&-p) {
            (self, other)
        } else if self.0.contains(&-p) && other.0.contains(&p) {
            (other, self)
        } else {
            return None;
        };
        let lits = pos
            .0
            .iter()
            .filter(|&&l| l != p)
            .chain(neg.0.iter().filter(|&&l| l != -p))
            .copied()
            .collect();
        Clause::new(lits)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("□");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&l| if l < 0 { format!("~p{}", -l) } else { format!("p{l}") })
            .collect();
        f.write_str(&parts.join(" | "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Clause of premise `k`; `k == premises.len()` is the negated goal.
    Input(usize),
    /// Resolvent of two earlier steps (0-based) on a variable.
    Resolvent { left: usize, right: usize, pivot: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefutationStep {
    pub clause: Clause,
    pub origin: Origin,
}

/// Input clauses used and resolvents, ending with the empty clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub steps: Vec<RefutationStep>,
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.steps.len().to_string().len();
        for (i, s) in self.steps.iter().enumerate() {
            let origin = match s.origin {
                Origin::Input(k) => format!("input {}", k + 1),
                Origin::Resolvent { left, right, pivot } => format!("res {}, {} on p{pivot}", left + 1, right + 1),
            };
            writeln!(f, "{:>width$}  {:<24} {origin}", i + 1, s.clause.to_string())?;
        }
        Ok(())
    }
}

enum Nnf {
    Lit(i32),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn nnf(phi: &Formula, positive: bool) -> Nnf {
    match phi {
        Formula::Var(v) => Nnf::Lit(if positive { *v as i32 } else { -(*v as i32) }),
        Formula::Not(x) => nnf(x, !positive),
        Formula::Binary(op, l, r) => match (op, positive) {
            (Connective::And, true) => Nnf::And(vec![nnf(l, true), nnf(r, true)]),
            (Connective::And, false) => Nnf::Or(vec![nnf(l, false), nnf(r, false)]),
            (Connective::Or, true) => Nnf::Or(vec![nnf(l, true), nnf(r, true)]),
            (Connective::Or, false) => Nnf::And(vec![nnf(l, false), nnf(r, false)]),
            (Connective::Implies, true) => Nnf::Or(vec![nnf(l, false), nnf(r, true)]),
            (Connective::Implies, false) => Nnf::And(vec![nnf(l, true), nnf(r, false)]),
            (Connective::Iff, true) => Nnf::And(vec![
                Nnf::Or(vec![nnf(l, false), nnf(r, true)]),
                Nnf::Or(vec![nnf(l, true), nnf(r, false)]),
            ]),
            (Connective::Iff, false) => Nnf::And(vec![
                Nnf::Or(vec![nnf(l, true), nnf(r, true)]),
                Nnf::Or(vec![nnf(l, false), nnf(r, false)]),
            ]),
        },
    }
}

fn cnf(n: &Nnf) -> Vec<Vec<i32>> {
    match n {
        Nnf::Lit(l) => vec![vec![*l]],
        Nnf::And(xs) => xs.iter().flat_map(cnf).collect(),
        Nnf::Or(xs) => xs.iter().fold(vec![Vec::new()], |acc, x| {
            let rhs = cnf(x);
            acc.iter()
                .flat_map(|a| {
                    rhs.iter().map(move |b| {
                        let mut c = a.clone();
                        c.extend(b);
                        c
                    })
                })
                .collect()
        }),
    }
}

/// Clause form by distribution, tautologies and repeats removed.
pub fn clausify(phi: &Formula) -> Vec<Clause> {
    let mut out: Vec<Clause> = Vec::new();
    for c in cnf(&nnf(phi, true)).into_iter().filter_map(Clause::new) {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn input_clauses(premises: &[Formula], goal: &Formula) -> Vec<(Clause, usize)> {
    let negated = Formula::not(goal.clone());
    premises
        .iter()
        .chain(std::iter::once(&negated))
        .enumerate()
        .flat_map(|(k, phi)| clausify(phi).into_iter().map(move |c| (c, k)))
        .collect()
}

/// Checks that `r` derives the empty clause from the clauses of
/// `premises` and the negated goal.
pub fn check_refutation(r: &Refutation, premises: &[Formula], goal: &Formula) -> Result<(), CheckError> {
    let inputs = input_clauses(premises, goal);
    for (i, step) in r.steps.iter().enumerate() {
        let fail = |message: String| CheckError { line: i + 1, message };
        match step.origin {
            Origin::Input(k) => {
                if !inputs.iter().any(|(c, j)| *j == k && *c == step.clause) {
                    return Err(fail(format!("{} is not a clause of input {}", step.clause, k + 1)));
                }
            }
            Origin::Resolvent { left, right, pivot } => {
                if left >= i || right >= i {
                    return Err(fail("resolvent cites a later step".into()));
                }
                let res = r.steps[left].clause.resolve(&r.steps[right].clause, pivot);
                if res.as_ref() != Some(&step.clause) {
                    return Err(fail(format!("not the resolvent of {} and {} on p{pivot}", left + 1, right + 1)));
                }
            }
        }
    }
    match r.steps.last() {
        Some(s) if s.clause.is_empty() => Ok(()),
        _ => Err(CheckError {
            line: 0,
            message: "refutation does not end with the empty clause".into(),
        }),
    }
}

/// Refutes `t ∪ {¬goal}` by binary resolution.
///
/// Clauses are selected lightest first, oldest among equals; a selected
/// clause subsumed by an active one is dropped. The reported length counts
/// the input clauses and resolvents the empty clause depends on.
pub fn resolution_prove(t: &[Formula], goal: &Formula, budget: &ProverBudget) -> ProverOutcome {
    let deadline = budget.time_limit.map(|d| Instant::now() + d);
    let mut store: Vec<(Clause, Origin)> = Vec::new();
    let mut seen: HashMap<Clause, usize> = HashMap::new();
    let mut passive = BinaryHeap::new();
    for (c, k) in input_clauses(t, goal) {
        if seen.contains_key(&c) {
            continue;
        }
        seen.insert(c.clone(), store.len());
        passive.push(Reverse((c.len(), store.len())));
        store.push((c, Origin::Input(k)));
    }
    let mut active: Vec<usize> = Vec::new();
    let mut empty = store.iter().position(|(c, _)| c.is_empty());
    let mut given_count = 0usize;
    'outer: while empty.is_none() {
        let Some(Reverse((_, given))) = passive.pop() else {
            return ProverOutcome::NotEntailed { states: store.len() };
        };
        given_count += 1;
        if given_count.is_multiple_of(64) && deadline.is_some_and(|d| Instant::now() >= d) {
            return exhausted(Exhaustion::Time, store.len(), passive.len());
        }
        let gc = store[given].0.clone();
        if active.iter().any(|&a| store[a].0.subsumes(&gc)) {
            continue;
        }
        active.push(given);
        for &a in &active {
            let other = store[a].0.clone();
            for &l in gc.literals() {
                if other.literals().binary_search(&-l).is_err() {
                    continue;
                }
                let pivot = l.unsigned_abs();
                let Some(res) = gc.resolve(&other, pivot) else {
                    continue;
                };
                if seen.contains_key(&res) {
                    continue;
                }
                let id = store.len();
                seen.insert(res.clone(), id);
                let is_empty = res.is_empty();
                passive.push(Reverse((res.len(), id)));
                store.push((
                    res,
                    Origin::Resolvent {
                        left: given,
                        right: a,
                        pivot,
                    },
                ));
                if is_empty {
                    empty = Some(id);
                    break 'outer;
                }
                if store.len() > budget.max_states {
                    return exhausted(Exhaustion::States, store.len(), passive.len());
                }
            }
        }
    }
    let refutation = extract(&store, empty.unwrap());
    ProverOutcome::Proved {
        length: ProofLength::new(refutation.steps.len()).unwrap(),
        proof: Certificate::Refutation(refutation),
        minimal: false,
        states: store.len(),
    }
}

fn exhausted(reason: Exhaustion, states: usize, frontier: usize) -> ProverOutcome {
    ProverOutcome::BudgetExhausted(Diagnostics {
        reason,
        states,
        frontier,
        explored_lines: 0,
    })
}

fn extract(store: &[(Clause, Origin)], root: usize) -> Refutation {
    let mut needed = vec![false; store.len()];
    let mut stack = vec![root];
    while let Some(i) = stack.pop() {
        if needed[i] {
            continue;
        }
        needed[i] = true;
        if let Origin::Resolvent { left, right, .. } = store[i].1 {
            stack.push(left);
            stack.push(right);
        }
    }
    let mut renumber = vec![usize::MAX; store.len()];
    let mut steps = Vec::new();
    for (i, (clause, origin)) in store.iter().enumerate() {
        if !needed[i] {
            continue;
        }
        renumber[i] = steps.len();
        let origin = match *origin {
            Origin::Resolvent { left, right, pivot } => Origin::Resolvent {
                left: renumber[left],
                right: renumber[right],
                pivot,
            },
            input => input,
        };
        steps.push(RefutationStep {
            clause: clause.clone(),
            origin,
        });
    }
    Refutation { steps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{entails, parse};

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn clause_forms() {
        let cs = clausify(&f("p1 <-> p2"));
        assert_eq!(cs, vec![Clause::new(vec![-1, 2]).unwrap(), Clause::new(vec![1, -2]).unwrap()]);
        assert!(clausify(&f("p1 | ~p1")).is_empty());
        assert_eq!(clausify(&f("~(p1 -> p2)")).len(), 2);
    }

    #[test]
    fn modus_ponens_refutation() {
        let t = [f("p1"), f("p1 -> p2")];
        match resolution_prove(&t, &f("p2"), &ProverBudget::default()) {
            ProverOutcome::Proved {
                proof: Certificate::Refutation(r),
                length,
                minimal,
                ..
            } => {
                assert!(!minimal);
                assert_eq!(length.get(), r.steps.len());
                assert_eq!(check_refutation(&r, &t, &f("p2")), Ok(()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn saturation_means_not_entailed() {
        let out = resolution_prove(&[f("p1")], &f("p2"), &ProverBudget::default());
        assert!(matches!(out, ProverOutcome::NotEntailed { .. }));
    }

    #[test]
    fn agrees_with_truth_tables() {
        let formulas = [
            "p1 & ~p2", "p1 | p2", "p1 -> p2", "p2 <-> ~p1", "~(p1 & p2)", "~p1 -> p2 & p3", "(p1 | p3) <-> p2",
        ];
        for a in formulas {
            for b in formulas {
                for g in formulas {
                    let t = [f(a), f(b)];
                    let goal = f(g);
                    let out = resolution_prove(&t, &goal, &ProverBudget::default());
                    match out {
                        ProverOutcome::Proved {
                            proof: Certificate::Refutation(r),
                            ..
                        } => {
                            assert!(entails(&t, &goal));
                            assert_eq!(check_refutation(&r, &t, &goal), Ok(()));
                        }
                        ProverOutcome::NotEntailed { .. } => assert!(!entails(&t, &goal)),
                        other => panic!("{other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn tampered_refutation_is_rejected() {
        let t = [f("p1"), f("p1 -> p2")];
        let ProverOutcome::Proved {
            proof: Certificate::Refutation(mut r),
            ..
        } = resolution_prove(&t, &f("p2"), &ProverBudget::default())
        else {
            panic!()
        };
        r.steps[0].clause = Clause::new(vec![3]).unwrap();
        assert!(check_refutation(&r, &t, &f("p2")).is_err());
    }
}
