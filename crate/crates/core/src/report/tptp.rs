//! Propositional problems in TPTP first-order form syntax.

use thiserror::Error;

use crate::formula::{parse, Connective, Formula, ParseError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TptpError {
    #[error("statement {0}: expected `fof(name, role, formula)`")]
    Statement(usize),
    #[error("statement {index}: {source}")]
    Formula { index: usize, source: ParseError },
    #[error("unsupported role `{0}`")]
    Role(String),
    #[error("expected exactly one conjecture, found {0}")]
    Conjectures(usize),
}

/// Fully parenthesised, so no precedence conventions are needed.
pub fn formula_to_tptp(phi: &Formula) -> String {
    match phi {
        Formula::Var(v) => format!("p{v}"),
        Formula::Not(c) => format!("~ {}", formula_to_tptp(c)),
        Formula::Binary(op, l, r) => {
            let sym = match op {
                Connective::Iff => "<=>",
                Connective::Implies => "=>",
                Connective::And => "&",
                Connective::Or => "|",
            };
            format!("({} {sym} {})", formula_to_tptp(l), formula_to_tptp(r))
        }
    }
}

pub fn export_tptp(theory: &[Formula], goal: &Formula) -> String {
    let mut out = String::new();
    for (i, phi) in theory.iter().enumerate() {
        out.push_str(&format!("fof(axiom_{}, axiom, {}).\n", i + 1, formula_to_tptp(phi)));
    }
    out.push_str(&format!("fof(goal, conjecture, {}).\n", formula_to_tptp(goal)));
    out
}

/// Reads back axioms and the conjecture. Accepts `%` comments and the
/// propositional subset with atoms `p1`, `p2`, ...
pub fn read_tptp(text: &str) -> Result<(Vec<Formula>, Formula), TptpError> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('%'))
        .collect::<Vec<_>>()
        .join(" ");
    let mut axioms = Vec::new();
    let mut goals = Vec::new();
    for (index, stmt) in body.split('.').map(str::trim).filter(|s| !s.is_empty()).enumerate() {
        let inner = stmt
            .strip_prefix("fof")
            .map(str::trim_start)
            .and_then(|s| s.strip_prefix('('))
            .and_then(|s| s.strip_suffix(')'))
            .ok_or(TptpError::Statement(index))?;
        let mut parts = inner.splitn(3, ',');
        let (_name, role, formula) = match (parts.next(), parts.next(), parts.next()) {
            (Some(n), Some(r), Some(f)) => (n, r.trim(), f),
            _ => return Err(TptpError::Statement(index)),
        };
        let ours = formula.replace("<=>", "<->").replace("=>", "->");
        let phi = parse(&ours).map_err(|source| TptpError::Formula { index, source })?;
        match role {
            "axiom" | "hypothesis" => axioms.push(phi),
            "conjecture" => goals.push(phi),
            other => return Err(TptpError::Role(other.to_string())),
        }
    }
    if goals.len() != 1 {
        return Err(TptpError::Conjectures(goals.len()));
    }
    Ok((axioms, goals.pop().unwrap()))
}
