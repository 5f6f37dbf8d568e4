//! Text formats for case results and speed-up matrices.
//!
//! Matrix cells are `0`, `1/5`, `-1/2` or `NA:<reason>`. A trailing `*`
//! marks the first theory of a family that contains the row's objective and
//! `~` any later one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::matrix::{Cell, Entry, SpeedupMatrix, Trivial, Undefined};
use super::run::{CaseResult, Outcome};
use super::Column;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] ::csv::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

fn bad(line: usize, message: impl Into<String>) -> CsvError {
    CsvError::Format {
        line,
        message: message.into(),
    }
}

#[derive(Serialize, Deserialize)]
struct ResultRow {
    family: usize,
    column: usize,
    row: usize,
    prefix: usize,
    status: String,
    #[serde(rename = "D")]
    length: Option<usize>,
    states: usize,
    millis: Option<u64>,
    seed: u64,
}

pub fn write_results(columns: &[Column], results: &[CaseResult], seed: u64) -> Result<String, CsvError> {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    for r in results {
        let c = columns[r.column];
        w.serialize(ResultRow {
            family: c.family,
            column: r.column,
            row: r.row,
            prefix: c.prefix,
            status: r.outcome.token().to_string(),
            length: r.length,
            states: r.states,
            millis: r.millis,
            seed,
        })?;
    }
    let bytes = w.into_inner().map_err(|e| ::csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_results(text: &str) -> Result<Vec<CaseResult>, CsvError> {
    let mut r = ::csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, row) in r.deserialize::<ResultRow>().enumerate() {
        let row = row?;
        let line = i + 2;
        let outcome = Outcome::from_token(&row.status).ok_or_else(|| bad(line, format!("unknown status `{}`", row.status)))?;
        if (outcome == Outcome::Proved) != row.length.is_some() {
            return Err(bad(line, "D must be present exactly for proved cases"));
        }
        out.push(CaseResult {
            column: row.column,
            row: row.row,
            outcome,
            length: row.length,
            states: row.states,
            millis: row.millis,
        });
    }
    Ok(out)
}

fn column_name(c: &Column) -> String {
    format!("f{}p{}s{}", c.family, c.prefix, c.size)
}

fn parse_column(s: &str) -> Option<Column> {
    let rest = s.strip_prefix('f')?;
    let (family, rest) = rest.split_once('p')?;
    let (prefix, size) = rest.split_once('s')?;
    Some(Column {
        family: family.parse().ok()?,
        prefix: prefix.parse().ok()?,
        size: size.parse().ok()?,
    })
}

fn cell_token(e: &Entry) -> String {
    let mut s = match e.cell {
        Cell::Value(v) => v.to_string(),
        Cell::Undefined(u) => format!("NA:{}", u.token()),
    };
    match e.trivial {
        Trivial::Strict => s.push('*'),
        Trivial::Degenerate => s.push('~'),
        Trivial::No => {}
    }
    s
}

fn parse_cell(s: &str) -> Option<Entry> {
    let (body, trivial) = if let Some(b) = s.strip_suffix('*') {
        (b, Trivial::Strict)
    } else if let Some(b) = s.strip_suffix('~') {
        (b, Trivial::Degenerate)
    } else {
        (s, Trivial::No)
    };
    let cell = match body.strip_prefix("NA:") {
        Some("unprovable") => Cell::Undefined(Undefined::Unprovable),
        Some("budget") => Cell::Undefined(Undefined::Budget),
        Some("noref") => Cell::Undefined(Undefined::NoReference),
        Some(_) => return None,
        None => Cell::Value(body.parse().ok()?),
    };
    Some(Entry {
        cell,
        trivial,
        reference: None,
    })
}

/// Writes `header` as `# ` comment lines followed by the matrix.
pub fn write_matrix(matrix: &SpeedupMatrix, header: &str) -> Result<String, CsvError> {
    let mut out = String::new();
    for line in header.lines() {
        out.push('#');
        if !line.is_empty() {
            out.push(' ');
            out.push_str(line);
        }
        out.push('\n');
    }
    let mut w = ::csv::Writer::from_writer(Vec::new());
    w.write_record(std::iter::once("row".to_string()).chain(matrix.columns.iter().map(column_name)))?;
    for row in 0..matrix.rows {
        let cells = (0..matrix.columns.len()).map(|c| cell_token(matrix.get(row, c)));
        w.write_record(std::iter::once(row.to_string()).chain(cells))?;
    }
    let bytes = w.into_inner().map_err(|e| ::csv::Error::from(e.into_error()))?;
    out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
    Ok(out)
}

/// Reads a matrix back, returning it with its comment header.
pub fn read_matrix(text: &str) -> Result<(SpeedupMatrix, String), CsvError> {
    let mut header = String::new();
    let mut skipped = 0;
    for line in text.lines() {
        let Some(rest) = line.strip_prefix('#') else { break };
        header.push_str(rest.strip_prefix(' ').unwrap_or(rest));
        header.push('\n');
        skipped += 1;
    }
    let body: String = text.lines().skip(skipped).flat_map(|l| [l, "\n"]).collect();
    let mut r = ::csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
    let names = r.headers()?.clone();
    if names.get(0) != Some("row") {
        return Err(bad(skipped + 1, "first column must be `row`"));
    }
    let columns = names
        .iter()
        .skip(1)
        .map(|n| parse_column(n).ok_or_else(|| bad(skipped + 1, format!("bad column name `{n}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut entries = Vec::new();
    let mut rows = 0;
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = skipped + i + 2;
        if rec.get(0).and_then(|s| s.parse::<usize>().ok()) != Some(i) {
            return Err(bad(line, "rows must be numbered from 0"));
        }
        if rec.len() != columns.len() + 1 {
            return Err(bad(line, "wrong number of cells"));
        }
        for tok in rec.iter().skip(1) {
            entries.push(parse_cell(tok).ok_or_else(|| bad(line, format!("bad cell `{tok}`")))?);
        }
        rows += 1;
    }
    Ok((SpeedupMatrix { columns, rows, entries }, header))
}
