//! Deterministic CSV emission.
//!
//! Cells are typed so formatting is decided in exactly one place: reals
//! always carry six decimals (rounded half away from zero), undefined
//! values become empty fields, and text is quoted RFC-4180 style when it
//! contains a delimiter. Rows are sorted by their leading columns before
//! writing, so the byte content of a file depends only on the row set.

use std::cmp::Ordering;
use std::path::Path;

/// One typed CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Verbatim text; quoted on demand.
    Text(String),
    /// Integer count.
    Int(i64),
    /// Finite real, rendered with exactly six decimals.
    Real(f64),
    /// Undefined value, rendered as an empty field.
    Empty,
}

impl Cell {
    /// Convenience constructor for text cells.
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    /// Real when defined, empty field otherwise.
    pub fn opt_real(x: Option<f64>) -> Self {
        match x {
            Some(v) => Cell::Real(v),
            None => Cell::Empty,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Text(s) => escape(s),
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => fmt_real(*x),
            Cell::Empty => String::new(),
        }
    }

    /// Sort rank across cell variants; comparisons within a column only
    /// ever reach one variant in practice, but the order must be total.
    fn rank(&self) -> u8 {
        match self {
            Cell::Empty => 0,
            Cell::Int(_) => 1,
            Cell::Real(_) => 2,
            Cell::Text(_) => 3,
        }
    }

    fn cmp_cell(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cell::Int(a), Cell::Int(b)) => a.cmp(b),
            (Cell::Real(a), Cell::Real(b)) => a.total_cmp(b),
            (Cell::Text(a), Cell::Text(b)) => a.cmp(b),
            (Cell::Empty, Cell::Empty) => Ordering::Equal,
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

/// Fixed-point rendering with six decimals, rounding half away from zero:
/// `0.5555555` → `"0.555556"`. `{:.6}` would round the underlying binary
/// value to nearest-even instead and print `0.555555` here.
pub fn fmt_real(x: f64) -> String {
    assert!(x.is_finite(), "CSV reals must be finite, got {x}");
    let micros = (x * 1e6).round() as i128;
    let sign = if micros < 0 { "-" } else { "" };
    let magnitude = micros.unsigned_abs();
    format!("{sign}{}.{:06}", magnitude / 1_000_000, magnitude % 1_000_000)
}

fn escape(field: &str) -> String {
    if field.contains(['"', ',', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn cmp_rows(a: &[Cell], b: &[Cell]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.cmp_cell(y))
        .find(|&ord| ord != Ordering::Equal)
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Render header and rows to the final file content, sorting rows by
/// their leading columns.
pub fn to_csv_string(header: &[&str], mut rows: Vec<Vec<Cell>>) -> String {
    for row in &rows {
        assert_eq!(row.len(), header.len(), "row width must match the header");
    }
    rows.sort_by(|a, b| cmp_rows(a, b));
    let mut out = header.join(",");
    out.push('\n');
    for row in &rows {
        let fields: Vec<String> = row.iter().map(Cell::render).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Write a sorted CSV file.
pub fn write_csv(path: &Path, header: &[&str], rows: Vec<Vec<Cell>>) -> std::io::Result<()> {
    std::fs::write(path, to_csv_string(header, rows))
}
