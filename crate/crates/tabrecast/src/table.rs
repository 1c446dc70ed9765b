//! Typed tables: cell typing (number > date > text), header/body parsing,
//! orientation detection and flipping, aggregate-row detection, and
//! candidate pools for substitution.
//!
//! The canonical wire format is `{"id": ..., "headers": [...], "rows":
//! [[...]]}` with every cell a raw string; [`Table::parse`] and
//! [`Table::to_raw`] round-trip it exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{depluralize_owned, HeaderLexicon};

/// Relative tolerance used for all numeric equality in the crate (aggregate
/// sum checks, SQL comparisons, oracle matching).
pub const REL_TOL: f64 = 1e-9;

/// `a == b` within [`REL_TOL`] relative tolerance.
pub fn approx_eq(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= REL_TOL * a.abs().max(b.abs())
}

/// Zero-based cell coordinate into the data rows of a table (the header row
/// is not addressable).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl Coord {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl From<(usize, usize)> for Coord {
    fn from((row, col): (usize, usize)) -> Self {
        Self { row, col }
    }
}

impl From<Coord> for (usize, usize) {
    fn from(c: Coord) -> Self {
        (c.row, c.col)
    }
}

/// Calendar date with optional month/day; a day is only ever present
/// together with its month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DateValue {
    pub year: i32,
    pub month: Option<u8>,
    pub day: Option<u8>,
}

impl DateValue {
    /// Ordering key with absent components pinned to 0.
    pub fn sort_key(&self) -> (i32, u8, u8) {
        (self.year, self.month.unwrap_or(0), self.day.unwrap_or(0))
    }
}

/// Inferred kind of a single cell. Parsing precedence is number > date >
/// text; whitespace-only cells are empty.
#[derive(Debug, Clone, PartialEq)]
pub enum CellKind {
    Number(f64),
    Date(DateValue),
    Text,
    Empty,
}

/// A cell: the raw text exactly as ingested plus its inferred kind.
#[derive(Debug, Clone, PartialEq)]
pub struct CellValue {
    pub raw: String,
    pub kind: CellKind,
}

impl CellValue {
    /// Type a raw cell. Numbers strip digit-group commas and at most one
    /// trailing unit token ("650 km", "89%"); dates need a month name or
    /// ISO form (bare years stay numbers).
    pub fn parse(raw: &str) -> Self {
        let trimmed = raw.trim();
        let kind = if trimmed.is_empty() {
            CellKind::Empty
        } else if let Some(n) = parse_number(trimmed) {
            CellKind::Number(n)
        } else if let Some(d) = parse_date(trimmed) {
            CellKind::Date(d)
        } else {
            CellKind::Text
        };
        Self {
            raw: raw.to_string(),
            kind,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.kind, CellKind::Empty)
    }

    pub fn as_number(&self) -> Option<f64> {
        match self.kind {
            CellKind::Number(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_date(&self) -> Option<DateValue> {
        match self.kind {
            CellKind::Date(d) => Some(d),
            _ => None,
        }
    }

    /// Coarse type used by column typing and orientation scoring.
    pub fn col_type(&self) -> Option<ColType> {
        match self.kind {
            CellKind::Number(_) => Some(ColType::Number),
            CellKind::Date(_) => Some(ColType::Date),
            CellKind::Text => Some(ColType::Text),
            CellKind::Empty => None,
        }
    }
}

/// Majority type of a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColType {
    Number,
    Date,
    Text,
}

/// How the table reached its vertical layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableOrientation {
    Vertical,
    FlippedFromHorizontal,
}

/// Canonical wire form of a table: raw strings only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTable {
    pub id: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// A parsed table: typed cells, majority column types, detected aggregate
/// rows, and the orientation it was ingested with.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub id: String,
    pub headers: Vec<String>,
    pub cells: Vec<Vec<CellValue>>,
    pub col_types: Vec<ColType>,
    /// Sorted indices of detected aggregate rows.
    pub aggregate_rows: Vec<usize>,
    pub orientation: TableOrientation,
}

impl Table {
    /// Parse a raw table assumed to already be vertical (headers on top).
    ///
    /// Fails when the header list is empty, a header name is blank, or a row
    /// length disagrees with the header count (the error names the row).
    pub fn parse(raw: &RawTable) -> Result<Self> {
        Self::parse_oriented(raw, TableOrientation::Vertical)
    }

    fn parse_oriented(raw: &RawTable, orientation: TableOrientation) -> Result<Self> {
        if raw.headers.is_empty() {
            return Err(Error::Structural("header list is empty".into()));
        }
        for (i, h) in raw.headers.iter().enumerate() {
            if h.trim().is_empty() {
                return Err(Error::Structural(format!("header {i} is empty")));
            }
        }
        let width = raw.headers.len();
        let mut cells = Vec::with_capacity(raw.rows.len());
        for (i, row) in raw.rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Structural(format!(
                    "row {i} has {} cells, expected {width}",
                    row.len()
                )));
            }
            cells.push(row.iter().map(|c| CellValue::parse(c)).collect::<Vec<_>>());
        }
        let aggregate_rows = detect_aggregate_rows_in(&cells);
        let col_types = majority_col_types(&cells, width, &aggregate_rows);
        Ok(Self {
            id: raw.id.clone(),
            headers: raw.headers.clone(),
            cells,
            col_types,
            aggregate_rows,
            orientation,
        })
    }

    /// Ingest a raw table running orientation detection first; horizontal
    /// grids are transposed so the first row of the transpose becomes the
    /// header. Returns the table and the score breakdown.
    pub fn ingest(raw: &RawTable, lexicon: &HeaderLexicon) -> Result<(Self, OrientationDecision)> {
        let mut grid: Vec<Vec<String>> = Vec::with_capacity(raw.rows.len() + 1);
        grid.push(raw.headers.clone());
        grid.extend(raw.rows.iter().cloned());
        let decision = detect_orientation(&grid, lexicon)?;
        let table = match decision.orientation {
            Orientation::Vertical => Self::parse(raw)?,
            Orientation::Horizontal => {
                let flipped = transpose(&grid);
                let raw = RawTable {
                    id: raw.id.clone(),
                    headers: flipped[0].clone(),
                    rows: flipped[1..].to_vec(),
                };
                Self::parse_oriented(&raw, TableOrientation::FlippedFromHorizontal)?
            }
        };
        Ok((table, decision))
    }

    /// Back to the canonical wire form (raw strings, current orientation).
    pub fn to_raw(&self) -> RawTable {
        RawTable {
            id: self.id.clone(),
            headers: self.headers.clone(),
            rows: self
                .cells
                .iter()
                .map(|row| row.iter().map(|c| c.raw.clone()).collect())
                .collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.cells.len()
    }

    pub fn n_cols(&self) -> usize {
        self.headers.len()
    }

    pub fn is_aggregate_row(&self, row: usize) -> bool {
        self.aggregate_rows.binary_search(&row).is_ok()
    }

    /// Cell accessor with a structural bounds error.
    pub fn cell(&self, at: Coord) -> Result<&CellValue> {
        self.cells
            .get(at.row)
            .and_then(|r| r.get(at.col))
            .ok_or_else(|| {
                Error::Structural(format!(
                    "cell ({}, {}) out of bounds for {}x{} table",
                    at.row,
                    at.col,
                    self.n_rows(),
                    self.n_cols()
                ))
            })
    }

    /// Indices of non-aggregate data rows, ascending.
    pub fn data_rows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_rows()).filter(|r| !self.is_aggregate_row(*r))
    }

    /// Resolve a header name case-insensitively with whitespace collapsed.
    /// The error lists the available headers.
    pub fn resolve_column(&self, name: &str) -> Result<usize> {
        let wanted = normalize_text(name);
        self.headers
            .iter()
            .position(|h| normalize_text(h) == wanted)
            .ok_or_else(|| Error::SqlResolution {
                name: name.to_string(),
                candidates: self.headers.clone(),
            })
    }
}

/// Lowercase, trim, and collapse inner whitespace (text equality form).
pub fn normalize_text(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// Compare a cell against a raw target string under a column type: numeric
/// columns compare parsed numbers within tolerance, date columns compare
/// date components, and everything else falls back to normalized text.
pub fn cell_matches_value(cell: &CellValue, target: &str, col_type: ColType) -> bool {
    match col_type {
        ColType::Number => {
            if let (CellKind::Number(have), Some(want)) = (&cell.kind, parse_number(target.trim()))
            {
                return approx_eq(*have, want);
            }
            normalize_text(&cell.raw) == normalize_text(target)
        }
        ColType::Date => {
            if let (CellKind::Date(have), Some(want)) = (&cell.kind, parse_date(target.trim())) {
                return *have == want;
            }
            normalize_text(&cell.raw) == normalize_text(target)
        }
        ColType::Text => normalize_text(&cell.raw) == normalize_text(target),
    }
}

fn majority_col_types(
    cells: &[Vec<CellValue>],
    width: usize,
    aggregate_rows: &[usize],
) -> Vec<ColType> {
    (0..width)
        .map(|col| {
            let mut counts = [0usize; 3]; // number, date, text
            let mut total = 0usize;
            for (r, row) in cells.iter().enumerate() {
                if aggregate_rows.binary_search(&r).is_ok() {
                    continue;
                }
                match row[col].col_type() {
                    Some(ColType::Number) => counts[0] += 1,
                    Some(ColType::Date) => counts[1] += 1,
                    Some(ColType::Text) => counts[2] += 1,
                    None => continue,
                }
                total += 1;
            }
            // Strict majority required; ties and empty columns type as text.
            if counts[0] * 2 > total {
                ColType::Number
            } else if counts[1] * 2 > total {
                ColType::Date
            } else {
                ColType::Text
            }
        })
        .collect()
}

/// Detect aggregate rows. A row is aggregate when either:
///
/// (a) its first text cell, lowercased and trimmed, is one of
///     {total, totals, sum, overall, all, combined}; or
/// (b) it participates numerically in at least one column where three or
///     more cells are numeric, and in *every* such column its value equals
///     the sum of the other numeric entries within relative tolerance.
pub fn detect_aggregate_rows(table: &Table) -> Vec<usize> {
    detect_aggregate_rows_in(&table.cells)
}

const AGGREGATE_LABELS: [&str; 6] = ["total", "totals", "sum", "overall", "all", "combined"];

fn detect_aggregate_rows_in(cells: &[Vec<CellValue>]) -> Vec<usize> {
    let n_rows = cells.len();
    let n_cols = cells.first().map_or(0, Vec::len);
    let mut flagged = Vec::new();
    for r in 0..n_rows {
        let label_hit = cells[r]
            .iter()
            .find(|c| matches!(c.kind, CellKind::Text))
            .map(|c| AGGREGATE_LABELS.contains(&normalize_text(&c.raw).as_str()))
            .unwrap_or(false);
        if label_hit {
            flagged.push(r);
            continue;
        }
        // Rule (b): sum check over every qualifying numeric column.
        let mut qualifying = 0usize;
        let mut all_sum = true;
        for col in 0..n_cols {
            let value = match cells[r][col].as_number() {
                Some(v) => v,
                None => continue,
            };
            let others: Vec<f64> = (0..n_rows)
                .filter(|rr| *rr != r)
                .filter_map(|rr| cells[rr][col].as_number())
                .collect();
            if others.len() + 1 < 3 {
                continue; // fewer than 3 numeric entries in this column
            }
            qualifying += 1;
            if !approx_eq(value, others.iter().sum()) {
                all_sum = false;
                break;
            }
        }
        if qualifying > 0 && all_sum {
            flagged.push(r);
        }
    }
    flagged
}

/// Raw-grid orientation as detected (before any flip).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Vertical,
    Horizontal,
}

/// Orientation decision with its score breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationDecision {
    pub orientation: Orientation,
    /// Mean per-column type homogeneity of the grid body (below row 0).
    pub vertical_score: f64,
    /// Mean per-row type homogeneity (right of column 0) plus any lexicon
    /// bonus.
    pub horizontal_score: f64,
    /// First-column entries whose final token hit the header-name lexicon.
    pub lexicon_hits: usize,
    /// First-column entries examined.
    pub lexicon_total: usize,
}

const LEXICON_BONUS: f64 = 0.25;

/// Decide whether a raw grid is vertical (headers on top) or horizontal
/// (headers in the first column).
///
/// `vertical_score` is the mean per-column type homogeneity of everything
/// below the first row; `horizontal_score` is the mean per-row homogeneity
/// of everything right of the first column, plus a 0.25 bonus when a strict
/// majority of first-column entries look like header names (their final
/// word, depluralized, is in the lexicon). Grids with fewer than two rows
/// or columns carry no evidence and default to vertical; exact ties resolve
/// to vertical.
pub fn detect_orientation(
    grid: &[Vec<String>],
    lexicon: &HeaderLexicon,
) -> Result<OrientationDecision> {
    let n_rows = grid.len();
    let n_cols = grid.first().map_or(0, Vec::len);
    if grid.iter().any(|r| r.len() != n_cols) {
        return Err(Error::Structural("ragged grid".into()));
    }
    if n_rows < 2 || n_cols < 2 {
        return Ok(OrientationDecision {
            orientation: Orientation::Vertical,
            vertical_score: 1.0,
            horizontal_score: 0.0,
            lexicon_hits: 0,
            lexicon_total: 0,
        });
    }

    let kinds: Vec<Vec<Option<ColType>>> = grid
        .iter()
        .map(|row| row.iter().map(|c| CellValue::parse(c).col_type()).collect())
        .collect();

    let homogeneity = |types: &[ColType]| -> f64 {
        if types.is_empty() {
            return 1.0;
        }
        let mut counts = [0usize; 3];
        for t in types {
            match t {
                ColType::Number => counts[0] += 1,
                ColType::Date => counts[1] += 1,
                ColType::Text => counts[2] += 1,
            }
        }
        *counts.iter().max().unwrap() as f64 / types.len() as f64
    };

    let vertical_score = (0..n_cols)
        .map(|c| {
            let column: Vec<ColType> = (1..n_rows).filter_map(|r| kinds[r][c]).collect();
            homogeneity(&column)
        })
        .sum::<f64>()
        / n_cols as f64;

    let row_score = (0..n_rows)
        .map(|r| {
            let row: Vec<ColType> = (1..n_cols).filter_map(|c| kinds[r][c]).collect();
            homogeneity(&row)
        })
        .sum::<f64>()
        / n_rows as f64;

    let lexicon_total = n_rows;
    let lexicon_hits = (0..n_rows)
        .filter(|r| {
            let entry = grid[*r][0].to_lowercase();
            let last = entry
                .split(|ch: char| !ch.is_alphanumeric())
                .filter(|t| !t.is_empty())
                .last();
            last.map(|t| lexicon.contains(&depluralize_owned(t)))
                .unwrap_or(false)
        })
        .count();
    let bonus = if lexicon_hits * 2 > lexicon_total {
        LEXICON_BONUS
    } else {
        0.0
    };
    let horizontal_score = row_score + bonus;

    Ok(OrientationDecision {
        orientation: if horizontal_score > vertical_score {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        },
        vertical_score,
        horizontal_score,
        lexicon_hits,
        lexicon_total,
    })
}

/// Transpose a rectangular grid. Involution: `transpose(transpose(g)) == g`.
pub fn transpose(grid: &[Vec<String>]) -> Vec<Vec<String>> {
    let n_rows = grid.len();
    let n_cols = grid.first().map_or(0, Vec::len);
    (0..n_cols)
        .map(|c| (0..n_rows).map(|r| grid[r][c].clone()).collect())
        .collect()
}

/// Replacement candidates for one source cell: same column, other
/// non-aggregate rows, non-empty, and type-conforming.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePool {
    pub source: Coord,
    pub candidates: Vec<Coord>,
}

/// Build the candidate pool for a substitution source.
///
/// The source must be a data cell: aggregate-row sources are refused with a
/// non-replaceable error (header cells are not addressable by [`Coord`] at
/// all). Candidates never include the source cell, aggregate-row cells,
/// empty cells, or cells whose kind disagrees with the column type.
pub fn candidate_pool(table: &Table, source: Coord) -> Result<CandidatePool> {
    table.cell(source)?;
    if table.is_aggregate_row(source.row) {
        return Err(Error::NonReplaceable {
            row: source.row,
            col: source.col,
            reason: "aggregate row".into(),
        });
    }
    Ok(CandidatePool {
        source,
        candidates: column_candidates(table, source.col, Some(source.row)),
    })
}

/// Type-conforming, non-empty, non-aggregate cells of a column (ascending
/// row), optionally excluding one row. This is the pool used when a
/// contradiction substitutes an aggregate-grounded value.
pub fn column_candidates(table: &Table, col: usize, exclude_row: Option<usize>) -> Vec<Coord> {
    let want = table.col_types[col];
    table
        .data_rows()
        .filter(|r| Some(*r) != exclude_row)
        .filter(|r| table.cells[*r][col].col_type() == Some(want))
        .map(|r| Coord::new(r, col))
        .collect()
}

fn strip_group_commas(s: &str) -> String {
    let bytes = s.as_bytes();
    let mut out = String::with_capacity(s.len());
    for (i, ch) in s.char_indices() {
        if ch == ',' {
            let prev_digit = i > 0 && bytes[i - 1].is_ascii_digit();
            let next_digit = bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit());
            if prev_digit && next_digit {
                continue;
            }
        }
        out.push(ch);
    }
    out
}

fn parse_plain_number(s: &str) -> Option<f64> {
    if s.is_empty() || !s.chars().any(|c| c.is_ascii_digit()) {
        return None;
    }
    if !s
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))
    {
        return None;
    }
    s.parse::<f64>().ok().filter(|n| n.is_finite())
}

/// Parse a cell-level number: digit-group commas stripped, an optional
/// trailing '%' or a single trailing unit word ("650 km") ignored.
pub fn parse_number(s: &str) -> Option<f64> {
    let s = strip_group_commas(s.trim());
    if let Some(n) = parse_plain_number(&s) {
        return Some(n);
    }
    if let Some(stripped) = s.strip_suffix('%') {
        if let Some(n) = parse_plain_number(stripped.trim_end()) {
            return Some(n);
        }
    }
    let mut parts = s.split_whitespace();
    if let (Some(first), Some(unit), None) = (parts.next(), parts.next(), parts.next()) {
        let unit_lower = unit.to_lowercase();
        let is_unit = unit.chars().all(char::is_alphabetic)
            && unit.len() <= 12
            && month_number(&unit_lower).is_none();
        if is_unit {
            if let Some(n) = parse_plain_number(first) {
                return Some(n);
            }
        }
    }
    None
}

pub(crate) fn month_number(word: &str) -> Option<u8> {
    const MONTHS: [&str; 12] = [
        "january",
        "february",
        "march",
        "april",
        "may",
        "june",
        "july",
        "august",
        "september",
        "october",
        "november",
        "december",
    ];
    MONTHS
        .iter()
        .position(|m| *m == word || (word.len() == 3 && m.starts_with(word)))
        .map(|i| i as u8 + 1)
}

fn parse_year(tok: &str) -> Option<i32> {
    if tok.len() == 4 && tok.chars().all(|c| c.is_ascii_digit()) {
        tok.parse::<i32>().ok().filter(|y| (1000..3000).contains(y))
    } else {
        None
    }
}

fn parse_day(tok: &str) -> Option<u8> {
    if (1..=2).contains(&tok.len()) && tok.chars().all(|c| c.is_ascii_digit()) {
        tok.parse::<u8>().ok().filter(|d| (1..=31).contains(d))
    } else {
        None
    }
}

/// Parse a cell-level date. Accepted: "January 20, 2009", "20 January
/// 2009", "January 2009" (month names may be 3-letter abbreviations) and
/// ISO "2009-01-20". A year is always required.
pub fn parse_date(s: &str) -> Option<DateValue> {
    let s = s.trim();
    // ISO form first: exactly YYYY-MM-DD.
    let iso: Vec<&str> = s.split('-').collect();
    if iso.len() == 3 {
        if let (Some(year), Some(month), Some(day)) =
            (parse_year(iso[0]), parse_day(iso[1]), parse_day(iso[2]))
        {
            if month <= 12 {
                return Some(DateValue {
                    year,
                    month: Some(month),
                    day: Some(day),
                });
            }
        }
    }
    let tokens: Vec<String> = s
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect();
    match tokens.len() {
        2 => {
            let (month, year) = (month_number(&tokens[0]), parse_year(&tokens[1]));
            if let (Some(m), Some(y)) = (month, year) {
                return Some(DateValue {
                    year: y,
                    month: Some(m),
                    day: None,
                });
            }
            None
        }
        3 => {
            // Month D, Y
            if let (Some(m), Some(d), Some(y)) = (
                month_number(&tokens[0]),
                parse_day(&tokens[1]),
                parse_year(&tokens[2]),
            ) {
                return Some(DateValue {
                    year: y,
                    month: Some(m),
                    day: Some(d),
                });
            }
            // D Month Y
            if let (Some(d), Some(m), Some(y)) = (
                parse_day(&tokens[0]),
                month_number(&tokens[1]),
                parse_year(&tokens[2]),
            ) {
                return Some(DateValue {
                    year: y,
                    month: Some(m),
                    day: Some(d),
                });
            }
            None
        }
        _ => None,
    }
}
