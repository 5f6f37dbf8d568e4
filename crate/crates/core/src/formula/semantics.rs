use super::{Connective, Formula};

/// Assignment of truth values to `p1..pm`; bit `v-1` holds the value of `pv`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Valuation {
    pub bits: u64,
    pub vars: u32,
}

impl Valuation {
    pub fn new(bits: u64, vars: u32) -> Self {
        Valuation { bits, vars }
    }

    pub fn get(&self, var: u32) -> bool {
        debug_assert!(var >= 1 && var <= self.vars);
        (self.bits >> (var - 1)) & 1 == 1
    }

    /// All `2^m` valuations in row order.
    pub fn all(vars: u32) -> impl Iterator<Item = Valuation> {
        (0..1u64 << vars).map(move |bits| Valuation { bits, vars })
    }
}

pub fn evaluate(phi: &Formula, v: &Valuation) -> bool {
    match phi {
        Formula::Var(i) => v.get(*i),
        Formula::Not(c) => !evaluate(c, v),
        Formula::Binary(op, l, r) => {
            let (a, b) = (evaluate(l, v), evaluate(r, v));
            match op {
                Connective::Iff => a == b,
                Connective::Implies => !a || b,
                Connective::And => a && b,
                Connective::Or => a || b,
            }
        }
    }
}

/// Packed truth table over `2^m` rows; row `r` assigns `pv` the bit `v-1` of `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    vars: u32,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn of(phi: &Formula, vars: u32) -> TruthTable {
        assert!(vars <= 24, "truth tables are limited to 24 variables");
        let mut t = TruthTable {
            vars,
            words: eval_words(phi, vars),
        };
        t.mask();
        t
    }

    pub fn constant(value: bool, vars: u32) -> TruthTable {
        let fill = if value { u64::MAX } else { 0 };
        let mut t = TruthTable {
            vars,
            words: vec![fill; word_count(vars)],
        };
        t.mask();
        t
    }

    fn mask(&mut self) {
        let rows = 1u64 << self.vars;
        if rows < 64 {
            self.words[0] &= (1u64 << rows) - 1;
        }
    }

    pub fn and_assign(&mut self, other: &TruthTable) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Every row true in `self` is true in `other`.
    pub fn implies(&self, other: &TruthTable) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn vars(&self) -> u32 {
        self.vars
    }
}

fn word_count(vars: u32) -> usize {
    ((1usize << vars) / 64).max(1)
}

fn var_words(var: u32, vars: u32) -> Vec<u64> {
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let k = var - 1;
    (0..word_count(vars))
        .map(|w| {
            if k < 6 {
                PATTERNS[k as usize]
            } else if (w >> (k - 6)) & 1 == 1 {
                u64::MAX
            } else {
                0
            }
        })
        .collect()
}

fn eval_words(phi: &Formula, vars: u32) -> Vec<u64> {
    match phi {
        Formula::Var(v) => {
            assert!(*v >= 1 && *v <= vars, "variable p{v} outside 1..={vars}");
            var_words(*v, vars)
        }
        Formula::Not(c) => eval_words(c, vars).into_iter().map(|w| !w).collect(),
        Formula::Binary(op, l, r) => {
            let (a, b) = (eval_words(l, vars), eval_words(r, vars));
            a.into_iter()
                .zip(b)
                .map(|(x, y)| match op {
                    Connective::Iff => !(x ^ y),
                    Connective::Implies => !x | y,
                    Connective::And => x & y,
                    Connective::Or => x | y,
                })
                .collect()
        }
    }
}

/// Largest variable index over a collection of formulas (at least 1).
pub fn max_var<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> u32 {
    formulas.into_iter().map(Formula::max_var).max().unwrap_or(1).max(1)
}

fn conjunction_table<'a, I: IntoIterator<Item = &'a Formula>>(t: I, vars: u32) -> TruthTable {
    let mut acc = TruthTable::constant(true, vars);
    for phi in t {
        acc.and_assign(&TruthTable::of(phi, vars));
    }
    acc
}

/// Whether every valuation satisfying all of `t` satisfies `beta`.
pub fn entails(t: &[Formula], beta: &Formula) -> bool {
    let vars = max_var(t.iter().chain(std::iter::once(beta)));
    conjunction_table(t, vars).implies(&TruthTable::of(beta, vars))
}

/// Whether some valuation satisfies all of `t`; the empty set is satisfiable.
pub fn is_satisfiable(t: &[Formula]) -> bool {
    let vars = max_var(t);
    !conjunction_table(t, vars).is_zero()
}
