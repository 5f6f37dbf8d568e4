use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use super::matrix::{Cell, SpeedupMatrix, Trivial, Undefined};

/// Counts behind one summary row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AuditCounts {
    /// Cells whose own case was proved.
    pub provable: usize,
    pub positive: usize,
    pub negative: usize,
}

impl AuditCounts {
    pub fn new(provable: usize, positive: usize, negative: usize) -> Self {
        AuditCounts {
            provable,
            positive,
            negative,
        }
    }

    /// Share of positive cells, truncated to one decimal, e.g. `11.2%`.
    pub fn positive_percentage(&self) -> String {
        percentage(self.positive, self.provable)
    }

    pub fn negative_percentage(&self) -> String {
        percentage(self.negative, self.provable)
    }

    /// Positive over negative, truncated to two decimals. `∞` when only
    /// positives were seen.
    pub fn ratio(&self) -> String {
        if self.negative == 0 {
            return if self.positive == 0 { "0.00".into() } else { "∞".into() };
        }
        let hundredths = self.positive * 100 / self.negative;
        format!("{}.{:02}", hundredths / 100, hundredths % 100)
    }
}

fn percentage(part: usize, whole: usize) -> String {
    let tenths = (part * 1000).checked_div(whole).unwrap_or(0);
    format!("{}.{}%", tenths / 10, tenths % 10)
}

/// Smallest observed speed-up for one family at one theory size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpsilonRow {
    pub family: usize,
    pub size: usize,
    /// `None` when no cell of that size is defined.
    pub min_delta: Option<Rational64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    NegativeSpeedup,
    /// A goal added as an axiom that did not shorten its own proof.
    TrivialNotPositive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub row: usize,
    pub column: usize,
    pub delta: Rational64,
    pub kind: WitnessKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    PossiblyNormal,
    NotNormal(Vec<Witness>),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::PossiblyNormal => f.write_str("possibly-normal"),
            Verdict::NotNormal(w) => write!(f, "not-normal ({} witnesses)", w.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityAudit {
    pub counts: AuditCounts,
    pub zero: usize,
    pub unprovable: usize,
    pub budget: usize,
    pub no_reference: usize,
    /// Strict trivial cells with a defined speed-up.
    pub trivial_checked: usize,
    pub trivial_positive: usize,
    pub epsilon: Vec<EpsilonRow>,
    pub verdict: Verdict,
}

impl NormalityAudit {
    pub fn total(&self) -> usize {
        self.counts.provable + self.unprovable + self.budget
    }

    /// Fraction of strict trivial cells detected as positive, truncated like
    /// the other percentages.
    pub fn trivial_rate(&self) -> String {
        percentage(self.trivial_positive, self.trivial_checked)
    }
}

pub fn audit(matrix: &SpeedupMatrix) -> NormalityAudit {
    let mut counts = AuditCounts::default();
    let (mut zero, mut unprovable, mut budget, mut no_reference) = (0, 0, 0, 0);
    let (mut trivial_checked, mut trivial_positive) = (0, 0);
    let mut witnesses = Vec::new();
    let mut eps: BTreeMap<(usize, usize), Option<Rational64>> = BTreeMap::new();
    for (f, s) in matrix.columns.iter().filter(|c| c.prefix > 0).map(|c| (c.family, c.size)) {
        eps.insert((f, s), None);
    }
    for row in 0..matrix.rows {
        for (column, c) in matrix.columns.iter().enumerate() {
            let entry = matrix.get(row, column);
            let v = match entry.cell {
                Cell::Undefined(Undefined::Unprovable) => {
                    unprovable += 1;
                    continue;
                }
                Cell::Undefined(Undefined::Budget) => {
                    budget += 1;
                    continue;
                }
                Cell::Undefined(Undefined::NoReference) => {
                    counts.provable += 1;
                    no_reference += 1;
                    continue;
                }
                Cell::Value(v) => v,
            };
            counts.provable += 1;
            if v > Rational64::zero() {
                counts.positive += 1;
            } else if v < Rational64::zero() {
                counts.negative += 1;
                witnesses.push(Witness {
                    row,
                    column,
                    delta: v,
                    kind: WitnessKind::NegativeSpeedup,
                });
            } else {
                zero += 1;
            }
            if entry.trivial == Trivial::Strict {
                trivial_checked += 1;
                if v > Rational64::zero() {
                    trivial_positive += 1;
                } else {
                    witnesses.push(Witness {
                        row,
                        column,
                        delta: v,
                        kind: WitnessKind::TrivialNotPositive,
                    });
                }
            }
            if c.prefix > 0 {
                let slot = eps.entry((c.family, c.size)).or_default();
                *slot = Some(slot.map_or(v, |m| m.min(v)));
            }
        }
    }
    let epsilon = eps
        .into_iter()
        .map(|((family, size), min_delta)| EpsilonRow { family, size, min_delta })
        .collect();
    let verdict = if witnesses.is_empty() {
        Verdict::PossiblyNormal
    } else {
        Verdict::NotNormal(witnesses)
    };
    NormalityAudit {
        counts,
        zero,
        unprovable,
        budget,
        no_reference,
        trivial_checked,
        trivial_positive,
        epsilon,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::matrix::Entry;
    use crate::experiment::Column;

    #[test]
    fn truncation() {
        let c = AuditCounts::new(5400, 606, 94);
        assert_eq!(c.positive_percentage(), "11.2%");
        assert_eq!(c.ratio(), "6.44");
        assert_eq!(AuditCounts::new(3, 2, 0).ratio(), "∞");
        assert_eq!(AuditCounts::default().positive_percentage(), "0.0%");
        assert_eq!(AuditCounts::default().ratio(), "0.00");
        assert_eq!(AuditCounts::new(3, 2, 3).ratio(), "0.66");
        assert_eq!(AuditCounts::new(3, 2, 1).positive_percentage(), "66.6%");
    }

    fn matrix(cells: &[(Cell, Trivial)]) -> SpeedupMatrix {
        SpeedupMatrix {
            columns: (0..cells.len())
                .map(|q| Column {
                    family: 0,
                    prefix: q,
                    size: 2 + q,
                })
                .collect(),
            rows: 1,
            entries: cells
                .iter()
                .map(|&(cell, trivial)| Entry {
                    cell,
                    trivial,
                    reference: None,
                })
                .collect(),
        }
    }

    #[test]
    fn verdicts_and_counts() {
        let v = |n, d| Cell::Value(Rational64::new(n, d));
        let m = matrix(&[
            (v(0, 1), Trivial::No),
            (v(1, 3), Trivial::Strict),
            (v(0, 1), Trivial::Degenerate),
            (Cell::Undefined(Undefined::Budget), Trivial::No),
        ]);
        let a = audit(&m);
        assert_eq!(a.verdict, Verdict::PossiblyNormal);
        assert_eq!(a.counts, AuditCounts::new(3, 1, 0));
        assert_eq!(a.zero, 2);
        assert_eq!(a.total(), 4);
        assert_eq!(a.trivial_rate(), "100.0%");
        assert_eq!(a.epsilon[0].min_delta, Some(Rational64::new(1, 3)));
        assert_eq!(a.epsilon[2].min_delta, None);

        let m = matrix(&[(v(0, 1), Trivial::No), (v(-1, 2), Trivial::No), (v(0, 1), Trivial::Strict)]);
        let Verdict::NotNormal(w) = audit(&m).verdict else { panic!() };
        assert_eq!(w.len(), 2);
        assert_eq!((w[0].column, w[0].kind), (1, WitnessKind::NegativeSpeedup));
        assert_eq!((w[1].column, w[1].kind), (2, WitnessKind::TrivialNotPositive));
    }
}
