use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::{Connective, Formula, GenerationParams};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("index {index} is outside 1..={size}")]
    OutOfRange { index: BigUint, size: BigUint },
    #[error("formula `{0}` is not a member of the formula space")]
    NotMember(String),
    #[error("invalid generation parameters: {0}")]
    InvalidParams(String),
}

/// Block sizes of the generation order, one entry per level `0..=n`.
///
/// Level `l` lists `P(l-1, m)` first, then the negations that are new at
/// this level, then the new binary formulas. The first `operands[l]` entries
/// of level `l` are exactly its operand set `S_l`.
#[derive(Debug, Clone)]
struct Levels {
    /// `f(l, m)`.
    total: Vec<BigUint>,
    /// `|S_l|`; zero at level 0, which has no binary formulas.
    operands: Vec<BigUint>,
    ops: Vec<Connective>,
}

impl Levels {
    fn new(params: &GenerationParams) -> Self {
        let n = params.depth as usize;
        let k = BigUint::from(params.ops.len());
        let mut total = vec![BigUint::from(params.vars)];
        let mut operands = vec![BigUint::zero()];
        for l in 1..=n {
            let prev = &total[l - 1];
            let prev2 = if l >= 2 { total[l - 2].clone() } else { BigUint::zero() };
            let s = prev + (prev - &prev2);
            let s_prev = &operands[l - 1];
            let binaries = &k * (&s * &s - s_prev * s_prev);
            total.push(&s + binaries);
            operands.push(s);
        }
        Levels {
            total,
            operands,
            ops: params.ops.iter().collect(),
        }
    }

    fn total_below(&self, level: usize) -> BigUint {
        if level == 0 {
            BigUint::zero()
        } else {
            self.total[level - 1].clone()
        }
    }

    /// 1-based `index` within level `level`.
    fn formula(&self, level: usize, index: &BigUint) -> Formula {
        if level == 0 {
            let v = index.to_u32().expect("variable index fits in u32");
            return Formula::Var(v);
        }
        let below = &self.total[level - 1];
        if index <= below {
            return self.formula(level - 1, index);
        }
        let s = &self.operands[level];
        if index <= s {
            let base = self.total_below(level - 1) + (index - below);
            return Formula::not(self.formula(level - 1, &base));
        }
        let s_prev = &self.operands[level - 1];
        let per_op = s * s - s_prev * s_prev;
        let rank = index - s - BigUint::one();
        let (op_rank, rr) = rank.div_rem(&per_op);
        let op = self.ops[op_rank.to_usize().expect("op rank")];
        let fresh = s - s_prev;
        let head = s_prev * &fresh;
        let (a, b) = if rr < head {
            let (a, b) = rr.div_rem(&fresh);
            (a, s_prev + b)
        } else {
            let (a, b) = (rr - head).div_rem(s);
            (s_prev + a, b)
        };
        let left = self.formula(level, &(a + 1u32));
        let right = self.formula(level, &(b + 1u32));
        Formula::binary(op, left, right)
    }

    /// 1-based index of `phi` in the generation order; `phi` must have
    /// depth within the tables.
    fn index(&self, phi: &Formula) -> Option<BigUint> {
        match phi {
            Formula::Var(v) => Some(BigUint::from(*v)),
            Formula::Not(child) => {
                let d = phi.depth() as usize;
                let inner = self.index(child)?;
                Some(&self.total[d - 1] + (inner - self.total_below(d - 1)))
            }
            Formula::Binary(op, l, r) => {
                let d = phi.depth() as usize;
                let op_rank = self.ops.iter().position(|o| o == op)?;
                let pa = self.index(l)? - 1u32;
                let pb = self.index(r)? - 1u32;
                let s = &self.operands[d];
                let s_prev = &self.operands[d - 1];
                let fresh = s - s_prev;
                let rr = if &pa < s_prev {
                    &pa * &fresh + (pb - s_prev)
                } else {
                    s_prev * &fresh + (pa - s_prev) * s + pb
                };
                let per_op = s * s - s_prev * s_prev;
                Some(s + per_op * BigUint::from(op_rank) + rr + 1u32)
            }
        }
    }
}

/// `f(n, m) = |P(n, m)|`.
pub fn count(params: &GenerationParams) -> BigUint {
    Levels::new(params).total.pop().expect("level 0 always present")
}

/// The `index`-th formula (1-based) of the generation order of `P(n, m)`.
pub fn formula_at(index: &BigUint, params: &GenerationParams) -> Result<Formula, IndexError> {
    let levels = Levels::new(params);
    let size = levels.total.last().unwrap();
    if index.is_zero() || index > size {
        return Err(IndexError::OutOfRange {
            index: index.clone(),
            size: size.clone(),
        });
    }
    Ok(levels.formula(params.depth as usize, index))
}

/// Inverse of [`formula_at`].
pub fn index_of(phi: &Formula, params: &GenerationParams) -> Result<BigUint, IndexError> {
    if !params.contains(phi) {
        return Err(IndexError::NotMember(phi.to_string()));
    }
    Levels::new(params)
        .index(phi)
        .ok_or_else(|| IndexError::NotMember(phi.to_string()))
}

/// Streams `P(n, m)` in generation order.
///
/// The iterator is lazy; callers bound consumption for large spaces.
#[derive(Debug, Clone)]
pub struct Enumeration {
    levels: Levels,
    depth: usize,
    next: BigUint,
    end: BigUint,
}

impl Enumeration {
    pub fn new(params: &GenerationParams) -> Self {
        let levels = Levels::new(params);
        let end = levels.total.last().unwrap().clone();
        Enumeration {
            levels,
            depth: params.depth as usize,
            next: BigUint::one(),
            end,
        }
    }

    /// Restricts the stream to the 1-based inclusive range `from..=to`.
    pub fn range(mut self, from: BigUint, to: BigUint) -> Self {
        self.next = from.max(BigUint::one());
        self.end = to.min(self.end);
        self
    }
}

impl Iterator for Enumeration {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        if self.next > self.end {
            return None;
        }
        let phi = self.levels.formula(self.depth, &self.next);
        self.next += 1u32;
        Some(phi)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        if self.next > self.end {
            return (0, Some(0));
        }
        let left = (&self.end - &self.next + 1u32).to_usize();
        (left.unwrap_or(usize::MAX), left)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::ConnectiveSet;

    fn params(n: u32, m: u32) -> GenerationParams {
        GenerationParams::new(n, m).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count(&params(0, 3)), BigUint::from(3u32));
        assert_eq!(count(&params(1, 1)), BigUint::from(18u32));
        assert_eq!(count(&params(1, 2)), BigUint::from(68u32));
        assert_eq!(count(&params(2, 2)), BigUint::from(71894u32));
        let and_only = GenerationParams::with_ops(1, 1, "and".parse().unwrap()).unwrap();
        assert_eq!(count(&and_only), BigUint::from(6u32));
    }

    #[test]
    fn level_zero_is_the_variables() {
        let all: Vec<_> = Enumeration::new(&params(0, 3)).collect();
        assert_eq!(all, vec![Formula::var(1), Formula::var(2), Formula::var(3)]);
    }

    #[test]
    fn first_negation_follows_variables() {
        for m in 1..=3 {
            let p = params(2, m);
            let phi = formula_at(&BigUint::from(m + 1), &p).unwrap();
            assert_eq!(phi, Formula::not(Formula::var(1)));
            assert_eq!(formula_at(&BigUint::one(), &p).unwrap(), Formula::var(1));
        }
    }

    #[test]
    fn out_of_range_and_non_members() {
        let p = params(1, 1);
        assert!(formula_at(&BigUint::from(19u32), &p).is_err());
        assert!(formula_at(&BigUint::zero(), &p).is_err());
        let deep = Formula::not(Formula::not(Formula::not(Formula::var(1))));
        assert!(matches!(index_of(&deep, &params(2, 1)), Err(IndexError::NotMember(_))));
        let no_or = GenerationParams::with_ops(1, 1, ConnectiveSet::without_or()).unwrap();
        let disj = Formula::or(Formula::var(1), Formula::var(1));
        assert!(index_of(&disj, &no_or).is_err());
    }

    #[test]
    fn order_is_op_major_then_operands() {
        let p = params(1, 1);
        let all: Vec<_> = Enumeration::new(&p).collect();
        let x = Formula::var(1);
        let nx = Formula::not(x.clone());
        assert_eq!(all[2], Formula::iff(x.clone(), x.clone()));
        assert_eq!(all[3], Formula::iff(x.clone(), nx.clone()));
        assert_eq!(all[4], Formula::iff(nx.clone(), x.clone()));
        assert_eq!(all[6], Formula::implies(x.clone(), x.clone()));
        assert_eq!(all[17], Formula::or(nx.clone(), nx));
    }

    #[test]
    fn range_restricts_stream() {
        let p = params(1, 2);
        let slice: Vec<_> = Enumeration::new(&p)
            .range(BigUint::from(3u32), BigUint::from(4u32))
            .collect();
        assert_eq!(slice, vec![Formula::not(Formula::var(1)), Formula::not(Formula::var(2))]);
    }
}
