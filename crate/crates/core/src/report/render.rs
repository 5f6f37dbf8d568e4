//! Incidence images as binary PPM.

use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::experiment::{Cell, SpeedupMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("cannot render an empty matrix")]
    Empty,
    #[error("{0}")]
    Spec(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    /// Side of one cell in pixels.
    pub cell: usize,
    /// Shade positive cells only, darker for larger speed-up.
    pub grayscale: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            cell: 4,
            grayscale: false,
        }
    }
}

pub const WHITE: [u8; 3] = [255, 255, 255];
pub const GREY: [u8; 3] = [128, 128, 128];
const LIGHT_GREY: [u8; 3] = [160, 160, 160];

/// Colour of one cell. Magnitudes are clamped at 1, so every δ below -1
/// gets the darkest red.
pub fn cell_color(cell: Cell, grayscale: bool) -> [u8; 3] {
    let v = match cell {
        Cell::Undefined(_) => return if grayscale { LIGHT_GREY } else { GREY },
        Cell::Value(v) => v,
    };
    let t = v.abs().to_f64().unwrap_or(1.0).min(1.0);
    let dim = (200.0 * (1.0 - t)).round() as u8;
    let strong = (255.0 - 100.0 * t).round() as u8;
    match (v.is_positive(), v.is_negative(), grayscale) {
        (false, false, _) => WHITE,
        (true, _, true) => {
            let g = (255.0 * (1.0 - t)).round() as u8;
            [g, g, g]
        }
        (_, true, true) => WHITE,
        (true, _, false) => [dim, dim, strong],
        (_, true, false) => [strong, dim, dim],
    }
}

/// One image, objectives down and theories across.
pub fn render_incidence(matrix: &SpeedupMatrix, spec: &RenderSpec) -> Result<Vec<u8>, RenderError> {
    render_columns(matrix, spec, 0..matrix.columns.len())
}

/// Splits the columns into `k` nearly equal contiguous panels.
pub fn render_panels(matrix: &SpeedupMatrix, spec: &RenderSpec, k: usize) -> Result<Vec<Vec<u8>>, RenderError> {
    let cols = matrix.columns.len();
    if k == 0 || k > cols.max(1) {
        return Err(RenderError::Spec(format!("cannot split {cols} columns into {k} panels")));
    }
    (0..k)
        .map(|p| render_columns(matrix, spec, p * cols / k..(p + 1) * cols / k))
        .collect()
}

fn render_columns(matrix: &SpeedupMatrix, spec: &RenderSpec, columns: std::ops::Range<usize>) -> Result<Vec<u8>, RenderError> {
    if matrix.rows == 0 || columns.is_empty() {
        return Err(RenderError::Empty);
    }
    if spec.cell == 0 {
        return Err(RenderError::Spec("cell size must be positive".into()));
    }
    let width = columns.len() * spec.cell;
    let height = matrix.rows * spec.cell;
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(width * height * 3);
    for row in 0..matrix.rows {
        let line: Vec<u8> = columns
            .clone()
            .flat_map(|c| {
                let rgb = cell_color(matrix.get(row, c).cell, spec.grayscale);
                std::iter::repeat_n(rgb, spec.cell).flatten()
            })
            .collect();
        for _ in 0..spec.cell {
            out.extend_from_slice(&line);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use num_rational::Rational64;

    use super::*;
    use crate::experiment::{Column, Entry, Trivial, Undefined};

    fn one(cell: Cell) -> SpeedupMatrix {
        SpeedupMatrix {
            columns: vec![Column { family: 0, prefix: 0, size: 1 }],
            rows: 1,
            entries: vec![Entry { cell, trivial: Trivial::No, reference: None }],
        }
    }

    #[test]
    fn single_cells() {
        let spec = RenderSpec { cell: 2, grayscale: false };
        let img = render_incidence(&one(Cell::Value(Rational64::from_integer(0))), &spec).unwrap();
        assert_eq!(&img[..11], b"P6\n2 2\n255\n");
        assert!(img[11..].iter().all(|&b| b == 255));
        assert_eq!(img.len(), 11 + 12);
        let img = render_incidence(&one(Cell::Undefined(Undefined::Budget)), &spec).unwrap();
        assert!(img[11..].iter().all(|&b| b == 128));
    }

    #[test]
    fn scales() {
        let c = |n, d| Cell::Value(Rational64::new(n, d));
        assert_eq!(cell_color(c(1, 1), false), [0, 0, 155]);
        assert_eq!(cell_color(c(-3, 1), false), [155, 0, 0]);
        assert_eq!(cell_color(c(1, 2), false), [100, 100, 205]);
        assert_eq!(cell_color(c(1, 2), true), [128, 128, 128]);
        assert_eq!(cell_color(c(-1, 2), true), WHITE);
    }

    #[test]
    fn panels_and_errors() {
        let m = SpeedupMatrix {
            columns: (0..5).map(|q| Column { family: 0, prefix: q, size: q + 1 }).collect(),
            rows: 1,
            entries: vec![Entry { cell: Cell::Value(Rational64::from_integer(0)), trivial: Trivial::No, reference: None }; 5],
        };
        let spec = RenderSpec { cell: 1, grayscale: false };
        let panels = render_panels(&m, &spec, 2).unwrap();
        assert_eq!(&panels[0][..11], b"P6\n2 1\n255\n");
        assert_eq!(&panels[1][..11], b"P6\n3 1\n255\n");
        assert!(render_panels(&m, &spec, 6).is_err());
        let empty = SpeedupMatrix { columns: vec![], rows: 0, entries: vec![] };
        assert_eq!(render_incidence(&empty, &spec), Err(RenderError::Empty));
    }
}
