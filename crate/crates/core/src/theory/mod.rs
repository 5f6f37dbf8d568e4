//! Theories as sets of positions in the propositions array.

mod sampling;

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::formula::{self, Formula, GenerationParams, IndexError};

pub use sampling::{
    sample_objectives, sample_theories, sample_theory_in_class, theory_rng, objective_rng,
    ObjectiveSample, SampleSpec, TheorySample,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoryError {
    #[error("position {index} exceeds the size {size} of the propositions array")]
    IndexTooLarge { index: BigUint, size: BigUint },
    #[error("positions must be strictly ascending and start at 1")]
    NotAscending,
    #[error("the theory is empty")]
    Empty,
    #[error("theory size j={j} exceeds f(n,m)={size}")]
    TooLarge { j: usize, size: BigUint },
    #[error("sample spec invalid: {0}")]
    InvalidSpec(String),
    #[error("rejection budget exhausted after {attempts} attempts ({rejected} unsatisfiable draws, {accepted} accepted)")]
    RejectionBudget {
        attempts: usize,
        rejected: usize,
        accepted: usize,
    },
    #[error("objective filter removed every candidate ({drawn} drawn)")]
    NoObjectives { drawn: usize },
    #[error("malformed theory text: {0}")]
    Malformed(String),
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// Gap counts `[k_1, ..., k_j]` between selected positions of the
/// characteristic bitstring of a theory.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JRepresentation(pub Vec<BigUint>);

impl JRepresentation {
    pub fn from_gaps<I: IntoIterator<Item = u64>>(gaps: I) -> Self {
        JRepresentation(gaps.into_iter().map(BigUint::from).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Positions `idx_i = k_1 + ... + k_i + i`, unchecked against any bound.
    pub fn positions(&self) -> Vec<BigUint> {
        let mut acc = BigUint::zero();
        self.0
            .iter()
            .map(|k| {
                acc += k + 1u32;
                acc.clone()
            })
            .collect()
    }
}

impl fmt::Display for JRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Positions selected by `k`, rejecting any beyond `f(n, m)`.
pub fn indices_from_jrep(k: &JRepresentation, params: &GenerationParams) -> Result<Vec<BigUint>, TheoryError> {
    let size = formula::count(params);
    let positions = k.positions();
    if let Some(last) = positions.last() {
        if last > &size {
            return Err(TheoryError::IndexTooLarge {
                index: last.clone(),
                size,
            });
        }
    }
    Ok(positions)
}

/// Gap counts for a strictly ascending list of 1-based positions.
pub fn jrep_from_indices(indices: &[BigUint]) -> Result<JRepresentation, TheoryError> {
    let mut prev = BigUint::zero();
    let mut gaps = Vec::with_capacity(indices.len());
    for idx in indices {
        if idx <= &prev {
            return Err(TheoryError::NotAscending);
        }
        gaps.push(idx - &prev - 1u32);
        prev = idx.clone();
    }
    Ok(JRepresentation(gaps))
}

/// Degree of separation `gs(t_K) = k_1 + ... + k_j`.
pub fn gs(k: &JRepresentation) -> BigUint {
    k.0.iter().sum()
}

/// The class `[g]` of all theories with separation order `g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeparationClass(pub BigUint);

impl SeparationClass {
    pub fn of(k: &JRepresentation) -> Self {
        SeparationClass(gs(k))
    }

    pub fn contains(&self, k: &JRepresentation) -> bool {
        gs(k) == self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoryRole {
    Base,
    /// `base ∪ O_prefix` for the family whose base has id `base`.
    Derived { base: usize, prefix: usize },
}

/// A finite set of formulas of `P(n, m)`, stored as sorted positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub params: GenerationParams,
    members: Vec<BigUint>,
    formulas: Vec<Formula>,
    pub role: TheoryRole,
}

impl Theory {
    /// Builds a theory from positions in any order; duplicates collapse.
    pub fn from_indices(params: GenerationParams, mut indices: Vec<BigUint>, role: TheoryRole) -> Result<Self, TheoryError> {
        indices.sort();
        indices.dedup();
        if indices.first().is_some_and(|i| i.is_zero()) {
            return Err(TheoryError::NotAscending);
        }
        let formulas = indices
            .iter()
            .map(|i| formula::formula_at(i, &params))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Theory {
            params,
            members: indices,
            formulas,
            role,
        })
    }

    pub fn from_jrep(params: GenerationParams, k: &JRepresentation) -> Result<Self, TheoryError> {
        let indices = indices_from_jrep(k, &params)?;
        Theory::from_indices(params, indices, TheoryRole::Base)
    }

    pub fn from_formulas(params: GenerationParams, formulas: &[Formula], role: TheoryRole) -> Result<Self, TheoryError> {
        let indices = formulas
            .iter()
            .map(|phi| formula::index_of(phi, &params))
            .collect::<Result<Vec<_>, _>>()?;
        Theory::from_indices(params, indices, role)
    }

    pub fn members(&self) -> &[BigUint] {
        &self.members
    }

    /// Member formulas in position order.
    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, phi: &Formula) -> bool {
        self.formulas.contains(phi)
    }

    pub fn jrep(&self) -> JRepresentation {
        jrep_from_indices(&self.members).expect("members are strictly ascending")
    }

    pub fn separation(&self) -> SeparationClass {
        SeparationClass::of(&self.jrep())
    }

    pub fn is_satisfiable(&self) -> bool {
        formula::is_satisfiable(&self.formulas)
    }

    /// `self ∪ extra` with the given role.
    pub fn extended(&self, extra: &[BigUint], role: TheoryRole) -> Result<Self, TheoryError> {
        let mut indices = self.members.clone();
        indices.extend(extra.iter().cloned());
        Theory::from_indices(self.params, indices, role)
    }

    /// Two-line text form: a params header and the j-representation.
    pub fn to_text(&self) -> String {
        format!("params: {}\nj-rep: {}\n", self.params, self.jrep())
    }

    pub fn from_text(text: &str) -> Result<Self, TheoryError> {
        let mut params = None;
        let mut jrep = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix("params:") {
                params = Some(parse_params(rest)?);
            } else if let Some(rest) = line.strip_prefix("j-rep:") {
                let gaps = rest
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<BigUint>().map_err(|e| TheoryError::Malformed(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                jrep = Some(JRepresentation(gaps));
            } else {
                return Err(TheoryError::Malformed(format!("unexpected line `{line}`")));
            }
        }
        let params = params.ok_or_else(|| TheoryError::Malformed("missing params line".into()))?;
        let jrep = jrep.ok_or_else(|| TheoryError::Malformed("missing j-rep line".into()))?;
        Theory::from_jrep(params, &jrep)
    }
}

/// Parses the `n=.. m=.. ops=..` header written by [`GenerationParams`]'s `Display`.
pub fn parse_params(text: &str) -> Result<GenerationParams, TheoryError> {
    let mut n = None;
    let mut m = None;
    let mut ops = formula::ConnectiveSet::FULL;
    for field in text.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| TheoryError::Malformed(format!("expected key=value, got `{field}`")))?;
        match key {
            "n" => n = Some(value.parse().map_err(|_| TheoryError::Malformed(format!("bad n `{value}`")))?),
            "m" => m = Some(value.parse().map_err(|_| TheoryError::Malformed(format!("bad m `{value}`")))?),
            "ops" => ops = value.parse().map_err(TheoryError::Malformed)?,
            other => return Err(TheoryError::Malformed(format!("unknown key `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| TheoryError::Malformed("missing n".into()))?;
    let m = m.ok_or_else(|| TheoryError::Malformed("missing m".into()))?;
    Ok(GenerationParams::with_ops(n, m, ops)?)
}

/// Syntactic complexity of a theory: the largest member depth.
pub fn theory_depth(t: &Theory) -> Result<u32, TheoryError> {
    t.formulas().iter().map(Formula::depth).max().ok_or(TheoryError::Empty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use proptest::prelude::*;

    fn big(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|x| BigUint::from(*x)).collect()
    }

    #[test]
    fn jrep_examples() {
        let params = GenerationParams::new(1, 2).unwrap();
        assert_eq!(indices_from_jrep(&JRepresentation::from_gaps([0, 0, 0]), &params).unwrap(), big(&[1, 2, 3]));
        assert_eq!(indices_from_jrep(&JRepresentation::from_gaps([2, 0, 1]), &params).unwrap(), big(&[3, 4, 6]));
        assert_eq!(gs(&JRepresentation::from_gaps([0, 0, 0])), BigUint::zero());
        assert_eq!(gs(&JRepresentation::from_gaps([2, 0, 1])), BigUint::from(3u32));
        assert_eq!(gs(&JRepresentation::from_gaps([7, 0, 0, 0])), BigUint::from(7u32));
        assert!(matches!(
            indices_from_jrep(&JRepresentation::from_gaps([66, 1]), &params),
            Err(TheoryError::IndexTooLarge { .. })
        ));
        assert!(indices_from_jrep(&JRepresentation::from_gaps([66, 0]), &params).is_ok());
        assert_eq!(jrep_from_indices(&big(&[3, 4, 6])).unwrap(), JRepresentation::from_gaps([2, 0, 1]));
        assert_eq!(jrep_from_indices(&big(&[3, 3])), Err(TheoryError::NotAscending));
    }

    #[test]
    fn theory_depths() {
        let params = GenerationParams::new(2, 2).unwrap();
        let f = |s: &str| parse(s).unwrap();
        let t = Theory::from_formulas(params, &[f("p1"), f("p2")], TheoryRole::Base).unwrap();
        assert_eq!(theory_depth(&t).unwrap(), 0);
        let t = Theory::from_formulas(params, &[f("p1"), f("~p1 & p2")], TheoryRole::Base).unwrap();
        assert_eq!(theory_depth(&t).unwrap(), 1);
        let t = Theory::from_formulas(params, &[f("p1"), f("~(~p1 & p2)")], TheoryRole::Base).unwrap();
        assert_eq!(theory_depth(&t).unwrap(), 2);
        let phi = f("(p1 -> p2) | ~~p2");
        let t = Theory::from_formulas(params, std::slice::from_ref(&phi), TheoryRole::Base).unwrap();
        assert_eq!(theory_depth(&t).unwrap(), phi.depth());
        let empty = Theory::from_indices(params, vec![], TheoryRole::Base).unwrap();
        assert_eq!(theory_depth(&empty), Err(TheoryError::Empty));
    }

    #[test]
    fn text_roundtrip() {
        let params = GenerationParams::with_ops(2, 2, "and,or".parse().unwrap()).unwrap();
        let t = Theory::from_jrep(params, &JRepresentation::from_gaps([4, 0, 9])).unwrap();
        let text = t.to_text();
        assert!(text.contains("j-rep: 4,0,9"));
        assert_eq!(Theory::from_text(&text).unwrap(), t);
        assert!(Theory::from_text("j-rep: 1").is_err());
    }

    proptest! {
        #[test]
        fn jrep_roundtrip(gaps in proptest::collection::vec(0u64..1000, 1..8)) {
            let k = JRepresentation::from_gaps(gaps);
            let idx = k.positions();
            prop_assert_eq!(jrep_from_indices(&idx).unwrap(), k.clone());
            prop_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn ascending_lists_roundtrip(mut xs in proptest::collection::btree_set(1u64..5000, 1..8)) {
            let list: Vec<BigUint> = std::mem::take(&mut xs).into_iter().map(BigUint::from).collect();
            let k = jrep_from_indices(&list).unwrap();
            prop_assert_eq!(k.positions(), list);
        }
    }
}
