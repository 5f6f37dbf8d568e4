use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use super::run::{CaseResult, Outcome};
use super::{Column, ExperimentError};

/// Column metadata plus, per family and objective row, the first prefix
/// whose theory contains the objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub columns: Vec<Column>,
    pub rows: usize,
    pub first_containing: Vec<Vec<Option<usize>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Undefined {
    /// The theory does not entail the objective.
    Unprovable,
    /// The prover ran out of budget on this cell.
    Budget,
    /// The cell is proved but no earlier family member is.
    NoReference,
}

impl Undefined {
    pub fn token(self) -> &'static str {
        match self {
            Undefined::Unprovable => "unprovable",
            Undefined::Budget => "budget",
            Undefined::NoReference => "noref",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Value(Rational64),
    Undefined(Undefined),
}

impl Cell {
    pub fn value(self) -> Option<Rational64> {
        match self {
            Cell::Value(v) => Some(v),
            Cell::Undefined(_) => None,
        }
    }
}

/// Whether the objective is a member of the column's theory.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Trivial {
    #[default]
    No,
    /// First family member containing the objective, so the reference
    /// theories all lack it.
    Strict,
    /// The objective was already in the base or an earlier member.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    pub cell: Cell,
    pub trivial: Trivial,
    /// Column the cell was compared against. Not persisted.
    pub reference: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpeedupMatrix {
    pub columns: Vec<Column>,
    pub rows: usize,
    /// Row-major.
    pub entries: Vec<Entry>,
}

impl SpeedupMatrix {
    pub fn get(&self, row: usize, column: usize) -> &Entry {
        &self.entries[row * self.columns.len() + column]
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Speed-up of every cell against the best earlier member of its family.
///
/// Base columns are 0 wherever proved. A derived column is compared with the
/// earlier family member that has the shortest recorded proof, ties going to
/// the earliest, and gets `1 - D(cell) / D(reference)`.
pub fn speedup_matrix(layout: &Layout, results: &[CaseResult]) -> Result<SpeedupMatrix, ExperimentError> {
    let cols = layout.columns.len();
    let mut table: Vec<Option<&CaseResult>> = vec![None; cols * layout.rows];
    for r in results {
        if r.column >= cols || r.row >= layout.rows {
            return Err(ExperimentError::Mismatch(format!("cell ({}, {}) is outside the grid", r.row, r.column)));
        }
        table[r.row * cols + r.column] = Some(r);
    }
    if let Some(k) = table.iter().position(Option::is_none) {
        return Err(ExperimentError::Mismatch(format!("no result for cell ({}, {})", k / cols, k % cols)));
    }
    let length = |row: usize, col: usize| {
        let r = table[row * cols + col].unwrap();
        match r.outcome {
            Outcome::Proved => Ok(r.length.unwrap_or(1)),
            Outcome::Unprovable => Err(Undefined::Unprovable),
            Outcome::Budget => Err(Undefined::Budget),
        }
    };
    let mut entries = Vec::with_capacity(cols * layout.rows);
    for row in 0..layout.rows {
        for (i, c) in layout.columns.iter().enumerate() {
            let trivial = match layout.first_containing[c.family][row] {
                Some(q) if q == c.prefix && q > 0 => Trivial::Strict,
                Some(q) if q <= c.prefix => Trivial::Degenerate,
                _ => Trivial::No,
            };
            let family_start = i - c.prefix;
            let (cell, reference) = match length(row, i) {
                Err(u) => (Cell::Undefined(u), None),
                Ok(_) if c.prefix == 0 => (Cell::Value(Rational64::zero()), Some(i)),
                Ok(d) => {
                    let best = (family_start..i)
                        .filter_map(|k| length(row, k).ok().map(|dk| (dk, k)))
                        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
                    match best {
                        Some((dr, k)) => (Cell::Value(delta(d, dr)), Some(k)),
                        None => (Cell::Undefined(Undefined::NoReference), None),
                    }
                }
            };
            entries.push(Entry { cell, trivial, reference });
        }
    }
    Ok(SpeedupMatrix {
        columns: layout.columns.clone(),
        rows: layout.rows,
        entries,
    })
}

fn delta(d: usize, reference: usize) -> Rational64 {
    Rational64::from_integer(1) - Rational64::new(d as i64, reference as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Incidence {
    Positive,
    Zero,
    Negative,
    Undefined,
}

impl Incidence {
    pub fn of(cell: Cell) -> Incidence {
        match cell {
            Cell::Undefined(_) => Incidence::Undefined,
            Cell::Value(v) => match v.cmp(&Rational64::zero()) {
                Ordering::Greater => Incidence::Positive,
                Ordering::Equal => Incidence::Zero,
                Ordering::Less => Incidence::Negative,
            },
        }
    }
}

impl fmt::Display for Incidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Incidence::Positive => "+",
            Incidence::Zero => "0",
            Incidence::Negative => "-",
            Incidence::Undefined => ".",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub columns: usize,
    pub rows: usize,
    /// Row-major.
    pub classes: Vec<Incidence>,
}

impl IncidenceMatrix {
    pub fn get(&self, row: usize, column: usize) -> Incidence {
        self.classes[row * self.columns + column]
    }

    pub fn count(&self, class: Incidence) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }
}

/// One character per cell, rows on lines.
impl fmt::Display for IncidenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.classes.chunks(self.columns.max(1)) {
            for c in row {
                write!(f, "{c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn incidence(matrix: &SpeedupMatrix) -> IncidenceMatrix {
    IncidenceMatrix {
        columns: matrix.columns.len(),
        rows: matrix.rows,
        classes: matrix.entries.iter().map(|e| Incidence::of(e.cell)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout(prefixes: usize, rows: usize) -> Layout {
        Layout {
            columns: (0..=prefixes)
                .map(|q| Column {
                    family: 0,
                    prefix: q,
                    size: 2 + q,
                })
                .collect(),
            rows,
            first_containing: vec![vec![None; rows]],
        }
    }

    fn result(column: usize, outcome: Outcome, length: Option<usize>) -> CaseResult {
        CaseResult {
            column,
            row: 0,
            outcome,
            length,
            states: 0,
            millis: None,
        }
    }

    #[test]
    fn min_rule_and_signs() {
        let results = [
            result(0, Outcome::Proved, Some(5)),
            result(1, Outcome::Proved, Some(4)),
            result(2, Outcome::Proved, Some(6)),
        ];
        let m = speedup_matrix(&layout(2, 1), &results).unwrap();
        assert_eq!(m.get(0, 0).cell, Cell::Value(Rational64::zero()));
        assert_eq!(m.get(0, 1).cell, Cell::Value(Rational64::new(1, 5)));
        assert_eq!(m.get(0, 2).cell, Cell::Value(Rational64::new(-1, 2)));
        assert_eq!(m.get(0, 2).reference, Some(1));
        let inc = incidence(&m);
        assert_eq!(
            inc.classes,
            vec![Incidence::Zero, Incidence::Positive, Incidence::Negative]
        );
    }

    #[test]
    fn ties_go_to_the_earliest_member() {
        let results = [
            result(0, Outcome::Proved, Some(4)),
            result(1, Outcome::Proved, Some(4)),
            result(2, Outcome::Proved, Some(3)),
        ];
        let m = speedup_matrix(&layout(2, 1), &results).unwrap();
        assert_eq!(m.get(0, 2).reference, Some(0));
        assert_eq!(m.get(0, 1).reference, Some(0));
    }

    #[test]
    fn undefined_reasons() {
        let results = [
            result(0, Outcome::Budget, None),
            result(1, Outcome::Proved, Some(3)),
            result(2, Outcome::Unprovable, None),
        ];
        let m = speedup_matrix(&layout(2, 1), &results).unwrap();
        assert_eq!(m.get(0, 0).cell, Cell::Undefined(Undefined::Budget));
        assert_eq!(m.get(0, 1).cell, Cell::Undefined(Undefined::NoReference));
        assert_eq!(m.get(0, 2).cell, Cell::Undefined(Undefined::Unprovable));
        assert_eq!(incidence(&m).count(Incidence::Undefined), 3);
    }

    #[test]
    fn trivial_classes_follow_membership() {
        let mut l = layout(3, 1);
        l.first_containing[0][0] = Some(2);
        let results: Vec<_> = (0..4).map(|c| result(c, Outcome::Proved, Some(if c >= 2 { 1 } else { 4 }))).collect();
        let m = speedup_matrix(&l, &results).unwrap();
        let kinds: Vec<_> = (0..4).map(|c| m.get(0, c).trivial).collect();
        assert_eq!(kinds, vec![Trivial::No, Trivial::No, Trivial::Strict, Trivial::Degenerate]);
        assert_eq!(m.get(0, 2).cell, Cell::Value(Rational64::new(3, 4)));
        assert_eq!(m.get(0, 3).cell, Cell::Value(Rational64::zero()));
    }

    #[test]
    fn missing_results_are_reported() {
        let results = [result(0, Outcome::Proved, Some(2))];
        assert!(speedup_matrix(&layout(1, 1), &results).is_err());
    }
}
