//! Fitch-style proofs: lines, justifications, rendering and checking.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::DeductionMode;
use crate::formula::{Connective, Formula};

/// What a line asserts. Falsum has no formula of its own.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    Formula(Formula),
    Bottom,
}

impl Claim {
    pub fn formula(&self) -> Option<&Formula> {
        match self {
            Claim::Formula(phi) => Some(phi),
            Claim::Bottom => None,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Formula(phi) => write!(f, "{phi}"),
            Claim::Bottom => f.write_str("⊥"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Premise,
    Assumption,
    Reiteration,
    AndIntro,
    AndElimLeft,
    AndElimRight,
    OrIntroLeft,
    OrIntroRight,
    OrElim,
    ImpliesIntro,
    ImpliesElim,
    IffIntro,
    /// `a ↔ b, a ⊢ b`
    IffElimLeft,
    /// `a ↔ b, b ⊢ a`
    IffElimRight,
    NotIntro,
    /// `a, ¬a ⊢ ⊥`
    NotElim,
    BottomElim,
    DoubleNegElim,
}

impl Rule {
    pub fn label(self) -> &'static str {
        match self {
            Rule::Premise => "Premise",
            Rule::Assumption => "Assumption",
            Rule::Reiteration => "R",
            Rule::AndIntro => "∧I",
            Rule::AndElimLeft => "∧E-left",
            Rule::AndElimRight => "∧E-right",
            Rule::OrIntroLeft => "∨I-left",
            Rule::OrIntroRight => "∨I-right",
            Rule::OrElim => "∨E",
            Rule::ImpliesIntro => "→I",
            Rule::ImpliesElim => "→E",
            Rule::IffIntro => "↔I",
            Rule::IffElimLeft => "↔E-left",
            Rule::IffElimRight => "↔E-right",
            Rule::NotIntro => "¬I",
            Rule::NotElim => "¬E",
            Rule::BottomElim => "⊥E",
            Rule::DoubleNegElim => "DNE",
        }
    }

    pub fn allowed_in(self, mode: DeductionMode) -> bool {
        self != Rule::DoubleNegElim || mode == DeductionMode::Classical
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A cited line or a cited closed subproof, by 1-based line numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reference {
    Line(usize),
    /// First (assumption) and last line of the subproof.
    Subproof(usize, usize),
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reference::Line(n) => write!(f, "{n}"),
            Reference::Subproof(s, e) => write!(f, "{s}-{e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub claim: Claim,
    pub rule: Rule,
    pub refs: Vec<Reference>,
    /// Number of enclosing subproofs; premises sit at 0.
    pub depth: usize,
}

impl Line {
    pub fn new(claim: Claim, rule: Rule, refs: Vec<Reference>, depth: usize) -> Self {
        Line { claim, rule, refs, depth }
    }

    pub fn premise(phi: Formula) -> Self {
        Line::new(Claim::Formula(phi), Rule::Premise, Vec::new(), 0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub lines: Vec<Line>,
}

impl Proof {
    pub fn new(lines: Vec<Line>) -> Self {
        Proof { lines }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Formulas of the lines justified as premises.
    pub fn premises(&self) -> Vec<&Formula> {
        self.lines
            .iter()
            .filter(|l| l.rule == Rule::Premise)
            .filter_map(|l| l.claim.formula())
            .collect()
    }

    pub fn uses_rule(&self, rule: Rule) -> bool {
        self.lines.iter().any(|l| l.rule == rule)
    }
}

/// Numbered lines with one `│` bar per open subproof.
impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.lines.len().to_string().len();
        let bodies: Vec<String> = self
            .lines
            .iter()
            .map(|l| format!("{}{}", "│ ".repeat(l.depth), l.claim))
            .collect();
        let pad = bodies.iter().map(|b| b.chars().count()).max().unwrap_or(0) + 2;
        for (i, (line, body)) in self.lines.iter().zip(&bodies).enumerate() {
            let refs: Vec<String> = line.refs.iter().map(|r| r.to_string()).collect();
            let just = if refs.is_empty() {
                line.rule.to_string()
            } else {
                format!("{} {}", line.rule, refs.join(", "))
            };
            let fill = pad - body.chars().count();
            writeln!(f, "{:>width$}  {body}{}{just}", i + 1, " ".repeat(fill))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct CheckError {
    /// 1-based; 0 for whole-proof problems.
    pub line: usize,
    pub message: String,
}

struct Checker<'a> {
    proof: &'a Proof,
    /// Open assumption lines (0-based) in scope after each line.
    scopes: Vec<Vec<usize>>,
    /// Assumption line -> last line of its subproof, once closed.
    closed: HashMap<usize, usize>,
    stack: Vec<usize>,
}

impl<'a> Checker<'a> {
    fn claim(&self, n: usize) -> &'a Claim {
        &self.proof.lines[n].claim
    }

    fn line_ref(&self, r: &Reference, at: usize) -> Result<usize, String> {
        match *r {
            Reference::Line(n) if n >= 1 && n - 1 < at => {
                let k = n - 1;
                if self.stack.starts_with(&self.scopes[k]) {
                    Ok(k)
                } else {
                    Err(format!("line {n} is inside a closed subproof"))
                }
            }
            Reference::Line(n) => Err(format!("line {n} does not precede this line")),
            Reference::Subproof(..) => Err(format!("expected a line, found subproof {r}")),
        }
    }

    /// Returns the assumption and conclusion of a cited subproof.
    fn subproof_ref(&self, r: &Reference, at: usize) -> Result<(&'a Claim, &'a Claim), String> {
        let Reference::Subproof(s, e) = *r else {
            return Err(format!("expected a subproof, found line {r}"));
        };
        if s == 0 || s > e || e > at {
            return Err(format!("subproof {r} does not precede this line"));
        }
        let (s0, e0) = (s - 1, e - 1);
        if self.proof.lines[s0].rule != Rule::Assumption {
            return Err(format!("line {s} is not an assumption"));
        }
        if self.closed.get(&s0) != Some(&e0) {
            return Err(format!("{r} is not a closed subproof"));
        }
        if self.scopes[e0] != self.scopes[s0] {
            return Err(format!("line {e} is nested deeper than subproof {r}"));
        }
        let parent = &self.scopes[s0][..self.scopes[s0].len() - 1];
        if !self.stack.starts_with(parent) {
            return Err(format!("subproof {r} is out of scope"));
        }
        Ok((self.claim(s0), self.claim(e0)))
    }

    fn close_to(&mut self, depth: usize, at: usize) {
        while self.stack.len() > depth {
            let a = self.stack.pop().unwrap();
            self.closed.insert(a, at - 1);
        }
    }
}

fn binary(c: &Claim, op: Connective) -> Option<(&Formula, &Formula)> {
    match c {
        Claim::Formula(Formula::Binary(o, l, r)) if *o == op => Some((l, r)),
        _ => None,
    }
}

fn negation(c: &Claim) -> Option<&Formula> {
    match c {
        Claim::Formula(Formula::Not(x)) => Some(x),
        _ => None,
    }
}

fn is(c: &Claim, phi: &Formula) -> bool {
    c.formula() == Some(phi)
}

/// Checks `proof` as a derivation of `goal` from premises drawn from `premises`.
pub fn check_proof(proof: &Proof, premises: &[Formula], goal: &Formula, mode: DeductionMode) -> Result<(), CheckError> {
    let whole = |message: &str| CheckError {
        line: 0,
        message: message.to_string(),
    };
    let last = proof.lines.last().ok_or_else(|| whole("empty proof"))?;
    let mut ck = Checker {
        proof,
        scopes: Vec::with_capacity(proof.lines.len()),
        closed: HashMap::new(),
        stack: Vec::new(),
    };
    for (i, line) in proof.lines.iter().enumerate() {
        let fail = |message: String| CheckError { line: i + 1, message };
        if !line.rule.allowed_in(mode) {
            return Err(fail(format!("{} is not available in {mode} mode", line.rule)));
        }
        if line.rule == Rule::Assumption {
            if line.depth == 0 || line.depth > ck.stack.len() + 1 {
                return Err(fail(format!("assumption opens depth {} from depth {}", line.depth, ck.stack.len())));
            }
            ck.close_to(line.depth - 1, i);
            ck.stack.push(i);
        } else {
            if line.depth > ck.stack.len() {
                return Err(fail(format!("depth {} without an open subproof", line.depth)));
            }
            ck.close_to(line.depth, i);
        }
        ck.scopes.push(ck.stack.clone());
        check_line(&ck, i, line, premises).map_err(fail)?;
    }
    if last.depth != 0 {
        return Err(whole("the last line is inside a subproof"));
    }
    if !is(&last.claim, goal) {
        return Err(whole(&format!("the last line proves {} instead of {goal}", last.claim)));
    }
    Ok(())
}

fn check_line(ck: &Checker<'_>, i: usize, line: &Line, premises: &[Formula]) -> Result<(), String> {
    let c = &line.claim;
    let refs = &line.refs;
    let arity = |n: usize| {
        if refs.len() == n {
            Ok(())
        } else {
            Err(format!("{} cites {} items, expected {n}", line.rule, refs.len()))
        }
    };
    let lines = || -> Result<Vec<&Claim>, String> { refs.iter().map(|r| ck.line_ref(r, i).map(|k| ck.claim(k))).collect() };
    let bad = || Err(format!("{} does not justify {c}", line.rule));
    match line.rule {
        Rule::Premise => {
            arity(0)?;
            if line.depth != 0 {
                return Err("premise inside a subproof".into());
            }
            match c.formula() {
                Some(phi) if premises.contains(phi) => Ok(()),
                _ => Err(format!("{c} is not a member of the theory")),
            }
        }
        Rule::Assumption => {
            arity(0)?;
            if c == &Claim::Bottom {
                return Err("cannot assume ⊥".into());
            }
            Ok(())
        }
        Rule::Reiteration => {
            arity(1)?;
            if lines()?[0] == c {
                Ok(())
            } else {
                bad()
            }
        }
        Rule::AndIntro => {
            arity(2)?;
            let xs = lines()?;
            match binary(c, Connective::And) {
                Some((l, r)) if is(xs[0], l) && is(xs[1], r) => Ok(()),
                _ => bad(),
            }
        }
        Rule::AndElimLeft | Rule::AndElimRight => {
            arity(1)?;
            let xs = lines()?;
            match binary(xs[0], Connective::And) {
                Some((l, _)) if line.rule == Rule::AndElimLeft && is(c, l) => Ok(()),
                Some((_, r)) if line.rule == Rule::AndElimRight && is(c, r) => Ok(()),
                _ => bad(),
            }
        }
        Rule::OrIntroLeft | Rule::OrIntroRight => {
            arity(1)?;
            let xs = lines()?;
            match binary(c, Connective::Or) {
                Some((l, _)) if line.rule == Rule::OrIntroLeft && is(xs[0], l) => Ok(()),
                Some((_, r)) if line.rule == Rule::OrIntroRight && is(xs[0], r) => Ok(()),
                _ => bad(),
            }
        }
        Rule::OrElim => {
            arity(3)?;
            let d = ck.claim(ck.line_ref(&refs[0], i)?);
            let (a1, c1) = ck.subproof_ref(&refs[1], i)?;
            let (a2, c2) = ck.subproof_ref(&refs[2], i)?;
            let Some((l, r)) = binary(d, Connective::Or) else {
                return Err(format!("∨E needs a disjunction, line cites {d}"));
            };
            let cases = (is(a1, l) && is(a2, r)) || (is(a1, r) && is(a2, l));
            if cases && c1 == c && c2 == c {
                Ok(())
            } else {
                bad()
            }
        }
        Rule::ImpliesIntro => {
            arity(1)?;
            let (a, b) = ck.subproof_ref(&refs[0], i)?;
            match binary(c, Connective::Implies) {
                Some((l, r)) if is(a, l) && is(b, r) => Ok(()),
                _ => bad(),
            }
        }
        Rule::ImpliesElim => {
            arity(2)?;
            let xs = lines()?;
            let fits = |a: &Claim, imp: &Claim| match binary(imp, Connective::Implies) {
                Some((l, r)) => is(a, l) && is(c, r),
                None => false,
            };
            if fits(xs[0], xs[1]) || fits(xs[1], xs[0]) {
                Ok(())
            } else {
                bad()
            }
        }
        Rule::IffIntro => {
            arity(2)?;
            let (a1, b1) = ck.subproof_ref(&refs[0], i)?;
            let (a2, b2) = ck.subproof_ref(&refs[1], i)?;
            match binary(c, Connective::Iff) {
                Some((l, r)) => {
                    let forward = |a: &Claim, b: &Claim| is(a, l) && is(b, r);
                    let backward = |a: &Claim, b: &Claim| is(a, r) && is(b, l);
                    if (forward(a1, b1) && backward(a2, b2)) || (forward(a2, b2) && backward(a1, b1)) {
                        Ok(())
                    } else {
                        bad()
                    }
                }
                None => bad(),
            }
        }
        Rule::IffElimLeft | Rule::IffElimRight => {
            arity(2)?;
            let xs = lines()?;
            let fits = |iff: &Claim, side: &Claim| match binary(iff, Connective::Iff) {
                Some((l, r)) if line.rule == Rule::IffElimLeft => is(side, l) && is(c, r),
                Some((l, r)) => is(side, r) && is(c, l),
                None => false,
            };
            if fits(xs[0], xs[1]) || fits(xs[1], xs[0]) {
                Ok(())
            } else {
                bad()
            }
        }
        Rule::NotIntro => {
            arity(1)?;
            let (a, b) = ck.subproof_ref(&refs[0], i)?;
            match (negation(c), b) {
                (Some(x), Claim::Bottom) if is(a, x) => Ok(()),
                _ => bad(),
            }
        }
        Rule::NotElim => {
            arity(2)?;
            let xs = lines()?;
            let clash = |a: &Claim, na: &Claim| matches!((a.formula(), negation(na)), (Some(x), Some(y)) if x == y);
            if c == &Claim::Bottom && (clash(xs[0], xs[1]) || clash(xs[1], xs[0])) {
                Ok(())
            } else {
                bad()
            }
        }
        Rule::BottomElim => {
            arity(1)?;
            if lines()?[0] == &Claim::Bottom && c != &Claim::Bottom {
                Ok(())
            } else {
                bad()
            }
        }
        Rule::DoubleNegElim => {
            arity(1)?;
            let xs = lines()?;
            match negation(xs[0]).and_then(|x| match x {
                Formula::Not(y) => Some(&**y),
                _ => None,
            }) {
                Some(y) if is(c, y) => Ok(()),
                _ => bad(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn line(s: &str, rule: Rule, refs: Vec<Reference>, depth: usize) -> Line {
        let claim = if s == "#" { Claim::Bottom } else { Claim::Formula(f(s)) };
        Line::new(claim, rule, refs, depth)
    }

    use Reference::{Line as L, Subproof as S};

    #[test]
    fn single_premise() {
        let p = Proof::new(vec![Line::premise(f("p1"))]);
        assert!(check_proof(&p, &[f("p1")], &f("p1"), DeductionMode::Classical).is_ok());
        assert!(check_proof(&p, &[f("p2")], &f("p1"), DeductionMode::Classical).is_err());
    }

    #[test]
    fn modus_ponens() {
        let p = Proof::new(vec![
            Line::premise(f("p1")),
            Line::premise(f("p1 -> p2")),
            line("p2", Rule::ImpliesElim, vec![L(1), L(2)], 0),
        ]);
        let t = [f("p1"), f("p1 -> p2")];
        assert!(check_proof(&p, &t, &f("p2"), DeductionMode::Intuitionistic).is_ok());
        let rendered = p.to_string();
        assert!(rendered.contains("→E 1, 2"), "{rendered}");
    }

    #[test]
    fn double_negation_needs_classical_mode() {
        let p = Proof::new(vec![
            Line::premise(f("~~p1")),
            line("p1", Rule::DoubleNegElim, vec![L(1)], 0),
        ]);
        let t = [f("~~p1")];
        assert!(check_proof(&p, &t, &f("p1"), DeductionMode::Classical).is_ok());
        let err = check_proof(&p, &t, &f("p1"), DeductionMode::Intuitionistic).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn subproof_scoping() {
        // p1 -> (p2 -> p1)
        let good = Proof::new(vec![
            line("p1", Rule::Assumption, vec![], 1),
            line("p2", Rule::Assumption, vec![], 2),
            line("p1", Rule::Reiteration, vec![L(1)], 2),
            line("p2 -> p1", Rule::ImpliesIntro, vec![S(2, 3)], 1),
            line("p1 -> p2 -> p1", Rule::ImpliesIntro, vec![S(1, 4)], 0),
        ]);
        assert!(check_proof(&good, &[], &f("p1 -> p2 -> p1"), DeductionMode::Intuitionistic).is_ok());

        // Citing a line from a closed subproof.
        let bad = Proof::new(vec![
            line("p1", Rule::Assumption, vec![], 1),
            line("p1 -> p1", Rule::ImpliesIntro, vec![S(1, 1)], 0),
            line("p1", Rule::Reiteration, vec![L(1)], 0),
        ]);
        let err = check_proof(&bad, &[], &f("p1"), DeductionMode::Classical).unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn disjunction_elimination_and_negation() {
        // p1 | p2, ~p2 ⊢ p1
        let p = Proof::new(vec![
            Line::premise(f("p1 | p2")),
            Line::premise(f("~p2")),
            line("p1", Rule::Assumption, vec![], 1),
            line("p2", Rule::Assumption, vec![], 1),
            line("#", Rule::NotElim, vec![L(4), L(2)], 1),
            line("p1", Rule::BottomElim, vec![L(5)], 1),
            line("p1", Rule::OrElim, vec![L(1), S(3, 3), S(4, 6)], 0),
        ]);
        let t = [f("p1 | p2"), f("~p2")];
        assert_eq!(check_proof(&p, &t, &f("p1"), DeductionMode::Intuitionistic), Ok(()));

        let q = Proof::new(vec![
            Line::premise(f("p1")),
            line("~p1", Rule::Assumption, vec![], 1),
            line("#", Rule::NotElim, vec![L(1), L(2)], 1),
            line("~~p1", Rule::NotIntro, vec![S(2, 3)], 0),
        ]);
        assert_eq!(check_proof(&q, &[f("p1")], &f("~~p1"), DeductionMode::Intuitionistic), Ok(()));
    }

    #[test]
    fn biconditional_rules() {
        let p = Proof::new(vec![
            Line::premise(f("p1 -> p2")),
            Line::premise(f("p2 -> p1")),
            line("p1", Rule::Assumption, vec![], 1),
            line("p2", Rule::ImpliesElim, vec![L(3), L(1)], 1),
            line("p2", Rule::Assumption, vec![], 1),
            line("p1", Rule::ImpliesElim, vec![L(5), L(2)], 1),
            line("p1 <-> p2", Rule::IffIntro, vec![S(3, 4), S(5, 6)], 0),
            line("p2", Rule::IffElimLeft, vec![L(7), L(3)], 0),
        ]);
        let t = [f("p1 -> p2"), f("p2 -> p1")];
        assert!(check_proof(&p, &t, &f("p1 <-> p2"), DeductionMode::Classical).is_err());
        let mut trimmed = p.clone();
        trimmed.lines.pop();
        assert_eq!(check_proof(&trimmed, &t, &f("p1 <-> p2"), DeductionMode::Classical), Ok(()));
    }

    #[test]
    fn wrong_goal_and_open_subproof() {
        let p = Proof::new(vec![line("p1", Rule::Assumption, vec![], 1)]);
        assert!(check_proof(&p, &[], &f("p1"), DeductionMode::Classical).is_err());
        let q = Proof::new(vec![Line::premise(f("p1"))]);
        assert!(check_proof(&q, &[f("p1")], &f("p2"), DeductionMode::Classical).is_err());
    }
}
