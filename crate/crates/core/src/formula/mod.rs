//! Propositional formulas over the variables `p1..pm`, the bounded
//! formula spaces `P(n, m)` and their generation-order indexing.

mod enumerate;
mod parse;
mod semantics;

use std::fmt;

pub use enumerate::{count, formula_at, index_of, Enumeration, IndexError};
pub use parse::{parse, parse_list, ParseError};
pub use semantics::{entails, evaluate, is_satisfiable, max_var, TruthTable, Valuation};

use serde::{Deserialize, Serialize};

/// Binary connectives, declared in canonical generation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    Iff,
    Implies,
    And,
    Or,
}

impl Connective {
    /// The canonical order used by the enumeration: IFF, IMPLIES, AND, OR.
    pub const ALL: [Connective; 4] = [
        Connective::Iff,
        Connective::Implies,
        Connective::And,
        Connective::Or,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Iff => "<->",
            Connective::Implies => "->",
            Connective::And => "&",
            Connective::Or => "|",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Connective::Iff => "iff",
            Connective::Implies => "implies",
            Connective::And => "and",
            Connective::Or => "or",
        }
    }

    /// Binding strength; larger binds tighter.
    pub(crate) fn precedence(self) -> u8 {
        match self {
            Connective::Iff => 1,
            Connective::Implies => 2,
            Connective::Or => 3,
            Connective::And => 4,
        }
    }

    pub(crate) fn right_assoc(self) -> bool {
        matches!(self, Connective::Iff | Connective::Implies)
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl std::str::FromStr for Connective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "iff" | "<->" => Ok(Connective::Iff),
            "implies" | "->" => Ok(Connective::Implies),
            "and" | "&" => Ok(Connective::And),
            "or" | "|" => Ok(Connective::Or),
            other => Err(format!("unknown connective `{other}`")),
        }
    }
}

/// A non-empty subset of the binary connectives, iterated in canonical order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConnectiveSet(u8);

impl ConnectiveSet {
    pub const FULL: ConnectiveSet = ConnectiveSet(0b1111);

    /// Builds a set from any iterator of connectives. Returns `None` when empty.
    pub fn new<I: IntoIterator<Item = Connective>>(ops: I) -> Option<Self> {
        let bits = ops.into_iter().fold(0u8, |acc, op| acc | op.bit());
        (bits != 0).then_some(ConnectiveSet(bits))
    }

    /// All four connectives except disjunction.
    pub fn without_or() -> Self {
        ConnectiveSet(ConnectiveSet::FULL.0 & !Connective::Or.bit())
    }

    pub fn contains(self, op: Connective) -> bool {
        self.0 & op.bit() != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Connective> {
        Connective::ALL.into_iter().filter(move |op| self.contains(*op))
    }

    /// Position of `op` among the members of this set, in canonical order.
    pub fn rank(self, op: Connective) -> Option<usize> {
        self.iter().position(|o| o == op)
    }
}

impl fmt::Debug for ConnectiveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ConnectiveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.iter().map(Connective::name).collect();
        f.write_str(&names.join(","))
    }
}

impl std::str::FromStr for ConnectiveSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let ops = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Connective>, _>>()?;
        ConnectiveSet::new(ops).ok_or_else(|| "connective set must not be empty".to_string())
    }
}

impl Serialize for ConnectiveSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ConnectiveSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ops = Vec::<Connective>::deserialize(d)?;
        ConnectiveSet::new(ops).ok_or_else(|| serde::de::Error::custom("empty connective set"))
    }
}

/// A propositional formula. Equality is purely syntactic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    /// 1-based variable index.
    Var(u32),
    Not(Box<Formula>),
    Binary(Connective, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(index: u32) -> Formula {
        Formula::Var(index)
    }

    pub fn not(child: Formula) -> Formula {
        Formula::Not(Box::new(child))
    }

    pub fn binary(op: Connective, left: Formula, right: Formula) -> Formula {
        Formula::Binary(op, Box::new(left), Box::new(right))
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::binary(Connective::And, left, right)
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::binary(Connective::Or, left, right)
    }

    pub fn implies(left: Formula, right: Formula) -> Formula {
        Formula::binary(Connective::Implies, left, right)
    }

    pub fn iff(left: Formula, right: Formula) -> Formula {
        Formula::binary(Connective::Iff, left, right)
    }

    /// Least `n` with `self ∈ P(n, m)`.
    ///
    /// A negation sits one level above its operand. A binary node sits one
    /// level above its operands, where a negated operand counts at the level
    /// of the formula it negates (the operands of level `n` are drawn from
    /// `P(n-1, m)` together with the negations of its members).
    pub fn depth(&self) -> u32 {
        match self {
            Formula::Var(_) => 0,
            Formula::Not(child) => child.depth() + 1,
            Formula::Binary(_, l, r) => l.operand_level().max(r.operand_level()) + 1,
        }
    }

    fn operand_level(&self) -> u32 {
        match self {
            Formula::Not(child) => child.depth(),
            other => other.depth(),
        }
    }

    /// Largest variable index occurring in the formula.
    pub fn max_var(&self) -> u32 {
        match self {
            Formula::Var(v) => *v,
            Formula::Not(c) => c.max_var(),
            Formula::Binary(_, l, r) => l.max_var().max(r.max_var()),
        }
    }

    /// Number of connective and variable nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::Not(c) => 1 + c.size(),
            Formula::Binary(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn uses_only(&self, ops: ConnectiveSet) -> bool {
        match self {
            Formula::Var(_) => true,
            Formula::Not(c) => c.uses_only(ops),
            Formula::Binary(op, l, r) => ops.contains(*op) && l.uses_only(ops) && r.uses_only(ops),
        }
    }

    /// Visits every subformula, the formula itself included, children first.
    pub fn for_each_subformula<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        match self {
            Formula::Var(_) => {}
            Formula::Not(c) => c.for_each_subformula(f),
            Formula::Binary(_, l, r) => {
                l.for_each_subformula(f);
                r.for_each_subformula(f);
            }
        }
        f(self);
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Var(_) | Formula::Not(_) => u8::MAX,
            Formula::Binary(op, _, _) => op.precedence(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => write!(f, "p{v}"),
            Formula::Not(c) => match **c {
                Formula::Binary(..) => write!(f, "~({c})"),
                _ => write!(f, "~{c}"),
            },
            Formula::Binary(op, l, r) => {
                let p = op.precedence();
                let (lp, rp) = (l.precedence(), r.precedence());
                let wrap_left = lp < p || (lp == p && op.right_assoc());
                let wrap_right = rp < p || (rp == p && !op.right_assoc());
                write_operand(f, l, wrap_left)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, r, wrap_right)
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, x: &Formula, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({x})")
    } else {
        write!(f, "{x}")
    }
}

/// Bounds of a formula space `P(n, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenerationParams {
    /// Maximum composition depth `n`.
    pub depth: u32,
    /// Number of variables `m`.
    pub vars: u32,
    /// Binary connectives allowed; negation is always available.
    pub ops: ConnectiveSet,
}

impl GenerationParams {
    pub fn new(depth: u32, vars: u32) -> Result<Self, IndexError> {
        Self::with_ops(depth, vars, ConnectiveSet::FULL)
    }

    pub fn with_ops(depth: u32, vars: u32, ops: ConnectiveSet) -> Result<Self, IndexError> {
        if vars == 0 {
            return Err(IndexError::InvalidParams("m must be positive".into()));
        }
        if ops.is_empty() {
            return Err(IndexError::InvalidParams("ops must not be empty".into()));
        }
        Ok(GenerationParams { depth, vars, ops })
    }

    /// The same space one level shallower, if any.
    pub fn shallower(self) -> Option<Self> {
        self.depth.checked_sub(1).map(|depth| GenerationParams { depth, ..self })
    }

    /// Whether `phi` belongs to `P(n, m)` restricted to `ops`.
    pub fn contains(&self, phi: &Formula) -> bool {
        phi.depth() <= self.depth
            && phi.max_var() <= self.vars
            && phi.uses_only(self.ops)
            && min_var(phi) >= 1
    }
}

impl fmt::Display for GenerationParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={} ops={}", self.depth, self.vars, self.ops)
    }
}

fn min_var(phi: &Formula) -> u32 {
    match phi {
        Formula::Var(v) => *v,
        Formula::Not(c) => min_var(c),
        Formula::Binary(_, l, r) => min_var(l).min(min_var(r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: u32) -> Formula {
        Formula::var(i)
    }

    #[test]
    fn depth_of_small_formulas() {
        assert_eq!(p(1).depth(), 0);
        assert_eq!(Formula::not(p(1)).depth(), 1);
        let conj = Formula::and(p(1), Formula::not(p(2)));
        assert_eq!(conj.depth(), 1);
        assert_eq!(Formula::not(conj.clone()).depth(), 2);
        assert_eq!(Formula::not(Formula::not(p(1))).depth(), 2);
        // A doubly negated operand sits at level 1, so the binary is level 2.
        let f = Formula::or(Formula::not(Formula::not(p(1))), p(1));
        assert_eq!(f.depth(), 2);
        assert_eq!(Formula::and(conj.clone(), conj).depth(), 2);
    }

    #[test]
    fn render_uses_minimal_parentheses() {
        let f = Formula::implies(p(1), Formula::implies(p(2), p(3)));
        assert_eq!(f.to_string(), "p1 -> p2 -> p3");
        let g = Formula::implies(Formula::implies(p(1), p(2)), p(3));
        assert_eq!(g.to_string(), "(p1 -> p2) -> p3");
        let h = Formula::and(Formula::or(p(1), p(2)), Formula::not(Formula::and(p(1), p(2))));
        assert_eq!(h.to_string(), "(p1 | p2) & ~(p1 & p2)");
    }

    #[test]
    fn connective_set_order_and_parsing() {
        let ops: ConnectiveSet = "or,and".parse().unwrap();
        assert_eq!(ops.iter().collect::<Vec<_>>(), vec![Connective::And, Connective::Or]);
        assert_eq!(ops.rank(Connective::Or), Some(1));
        assert!("".parse::<ConnectiveSet>().is_err());
        assert_eq!(ConnectiveSet::without_or().len(), 3);
    }

    #[test]
    fn params_membership() {
        let params = GenerationParams::with_ops(1, 2, "and".parse().unwrap()).unwrap();
        assert!(params.contains(&Formula::and(p(1), Formula::not(p(2)))));
        assert!(!params.contains(&Formula::or(p(1), p(2))));
        assert!(!params.contains(&Formula::and(p(1), p(3))));
        assert!(!params.contains(&Formula::not(Formula::not(p(1)))));
        assert!(GenerationParams::new(1, 0).is_err());
    }
}
