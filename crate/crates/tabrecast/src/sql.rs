//! A small SQL subset for semantic-parse recasting.
//!
//! Supported shape (keywords case-insensitive):
//!
//! ```text
//! SELECT [agg(]column[)] FROM name [WHERE column op value [AND ...]]
//! ```
//!
//! with `agg` one of `count sum avg min max`, `op` one of `= != < <= > >=`,
//! and `value` either a literal (optionally quoted) or `min(column)` /
//! `max(column)`. Anything else — `OR`, joins, grouping, ordering, multiple
//! select columns — is reported as unsupported. Aggregate rows never
//! participate in evaluation. Queries also yield typed skeletons
//! (`select c1_text from t where c2_num = max(c2_num)`) that can be
//! re-instantiated on other tables.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::align::{canonical_number, normalize_tokens};
use crate::error::{Error, Result};
use crate::lexicon::depluralize;
use crate::table::{approx_eq, normalize_text, parse_date, parse_number, ColType, Table};

/// Aggregate function of a `SELECT agg(col)` query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggFn {
    Count,
    Sum,
    Avg,
    Min,
    Max,
}

impl AggFn {
    pub fn as_str(self) -> &'static str {
        match self {
            AggFn::Count => "count",
            AggFn::Sum => "sum",
            AggFn::Avg => "avg",
            AggFn::Min => "min",
            AggFn::Max => "max",
        }
    }

    fn parse(name: &str) -> Option<AggFn> {
        match name.to_ascii_lowercase().as_str() {
            "count" => Some(AggFn::Count),
            "sum" => Some(AggFn::Sum),
            "avg" => Some(AggFn::Avg),
            "min" => Some(AggFn::Min),
            "max" => Some(AggFn::Max),
            _ => None,
        }
    }
}

/// Comparison operator of a `WHERE` condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn as_str(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// `min` / `max` used as a right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremum {
    Min,
    Max,
}

impl Extremum {
    pub fn as_str(self) -> &'static str {
        match self {
            Extremum::Min => "min",
            Extremum::Max => "max",
        }
    }
}

/// Right-hand side of a condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Rhs {
    Literal(String),
    Extremum { func: Extremum, col: usize },
}

/// One `column op value` condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub col: usize,
    pub op: CmpOp,
    pub rhs: Rhs,
}

/// A parsed query, column names resolved to indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub table_name: String,
    pub select_col: usize,
    pub agg: Option<AggFn>,
    pub conditions: Vec<Condition>,
}

/// Result of executing a query.
#[derive(Debug, Clone, PartialEq)]
pub enum Answer {
    Number(f64),
    Text(String),
    List(Vec<String>),
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

/// ASCII-lowercased copy with identical byte positions.
fn ascii_lower(s: &str) -> String {
    s.chars().map(|c| c.to_ascii_lowercase()).collect()
}

/// First occurrence of `needle` outside quoted regions, optionally
/// requiring word boundaries. `haystack` must already be lowercase.
fn find_outside_quotes(haystack: &str, needle: &str, word_boundary: bool) -> Option<usize> {
    let bytes = haystack.as_bytes();
    let nb = needle.as_bytes();
    let mut quote: Option<u8> = None;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if let Some(q) = quote {
            if b == q {
                quote = None;
            }
            i += 1;
            continue;
        }
        if b == b'\'' || b == b'"' {
            quote = Some(b);
            i += 1;
            continue;
        }
        if i + nb.len() <= bytes.len() && &bytes[i..i + nb.len()] == nb {
            let before_ok = !word_boundary || i == 0 || !is_word_byte(bytes[i - 1]);
            let after_ok = !word_boundary
                || i + nb.len() == bytes.len()
                || !is_word_byte(bytes[i + nb.len()]);
            if before_ok && after_ok {
                return Some(i);
            }
        }
        i += 1;
    }
    None
}

/// Split on every occurrence of `sep` (word-bounded, outside quotes).
fn split_outside_quotes<'a>(s: &'a str, lower: &str, sep: &str) -> Vec<&'a str> {
    let mut parts = Vec::new();
    let mut offset = 0;
    let mut rest_lower = lower;
    loop {
        match find_outside_quotes(rest_lower, sep, true) {
            Some(pos) => {
                parts.push(&s[offset..offset + pos]);
                offset += pos + sep.len();
                rest_lower = &lower[offset..];
            }
            None => {
                parts.push(&s[offset..]);
                return parts;
            }
        }
    }
}

const UNSUPPORTED_KEYWORDS: [&str; 11] = [
    "or", "join", "union", "group", "order", "having", "limit", "distinct", "like", "between",
    "in",
];

/// Parse a query against a table, resolving column names to indices.
pub fn parse_sql(table: &Table, text: &str) -> Result<Query> {
    let trimmed = text.trim().trim_end_matches(';').trim();
    if trimmed.is_empty() {
        return Err(Error::SqlParse("empty query".into()));
    }
    let lower = ascii_lower(trimmed);
    for kw in UNSUPPORTED_KEYWORDS {
        if find_outside_quotes(&lower, kw, true).is_some() {
            return Err(Error::SqlUnsupported(format!("`{kw}` is outside the subset")));
        }
    }
    if !lower.starts_with("select") || !lower[6..].starts_with(char::is_whitespace) {
        return Err(Error::SqlParse("query must start with `select`".into()));
    }
    let body = &trimmed[7..];
    let body_lower = &lower[7..];
    let from_pos = find_outside_quotes(body_lower, "from", true)
        .ok_or_else(|| Error::SqlParse("missing `from`".into()))?;
    let select_part = body[..from_pos].trim();
    let after_from = &body[from_pos + 4..];
    let after_lower = &body_lower[from_pos + 4..];

    let (table_part, where_part) = match find_outside_quotes(after_lower, "where", true) {
        Some(pos) => (after_from[..pos].trim(), Some(after_from[pos + 5..].trim())),
        None => (after_from.trim(), None),
    };
    if table_part.is_empty() || table_part.split_whitespace().count() != 1 {
        return Err(Error::SqlParse(format!(
            "expected a single table name, got `{table_part}`"
        )));
    }

    if select_part.contains(',') {
        return Err(Error::SqlUnsupported(
            "multiple select columns are outside the subset".into(),
        ));
    }
    if select_part.contains('*') {
        return Err(Error::SqlUnsupported("`select *` is outside the subset".into()));
    }
    let (agg, select_name) = match select_part.find('(') {
        Some(open) if select_part.ends_with(')') => {
            let func = select_part[..open].trim();
            let inner = select_part[open + 1..select_part.len() - 1].trim();
            match AggFn::parse(func) {
                Some(a) => (Some(a), inner),
                None if func.is_empty() => (None, inner),
                None => {
                    return Err(Error::SqlUnsupported(format!(
                        "function `{func}` is outside the subset"
                    )))
                }
            }
        }
        _ => (None, select_part),
    };
    if select_name.is_empty() {
        return Err(Error::SqlParse("missing select column".into()));
    }
    let select_col = table.resolve_column(select_name)?;
    if matches!(agg, Some(AggFn::Sum) | Some(AggFn::Avg))
        && table.col_types[select_col] != ColType::Number
    {
        return Err(Error::SqlUnsupported(format!(
            "{} over non-numeric column `{}`",
            agg.unwrap().as_str(),
            table.headers[select_col]
        )));
    }

    let mut conditions = Vec::new();
    if let Some(wp) = where_part {
        if wp.is_empty() {
            return Err(Error::SqlParse("empty `where` clause".into()));
        }
        let wp_lower = ascii_lower(wp);
        for cond_text in split_outside_quotes(wp, &wp_lower, "and") {
            conditions.push(parse_condition(table, cond_text.trim())?);
        }
    }

    Ok(Query {
        table_name: table_part.to_string(),
        select_col,
        agg,
        conditions,
    })
}

fn find_op(s: &str) -> Option<(usize, CmpOp, usize)> {
    let bytes = s.as_bytes();
    let mut quote: Option<u8> = None;
    for i in 0..bytes.len() {
        let b = bytes[i];
        if let Some(q) = quote {
            if b == q {
                quote = None;
            }
            continue;
        }
        if b == b'\'' || b == b'"' {
            quote = Some(b);
            continue;
        }
        let two = if i + 1 < bytes.len() {
            match &bytes[i..i + 2] {
                b"<=" => Some(CmpOp::Le),
                b">=" => Some(CmpOp::Ge),
                b"!=" => Some(CmpOp::Ne),
                _ => None,
            }
        } else {
            None
        };
        if let Some(op) = two {
            return Some((i, op, 2));
        }
        let one = match b {
            b'<' => Some(CmpOp::Lt),
            b'>' => Some(CmpOp::Gt),
            b'=' => Some(CmpOp::Eq),
            _ => None,
        };
        if let Some(op) = one {
            return Some((i, op, 1));
        }
    }
    None
}

fn unquote(s: &str) -> Option<&str> {
    let b = s.as_bytes();
    if b.len() >= 2 && (b[0] == b'\'' || b[0] == b'"') && b[b.len() - 1] == b[0] {
        Some(&s[1..s.len() - 1])
    } else {
        None
    }
}

fn parse_condition(table: &Table, text: &str) -> Result<Condition> {
    let (pos, op, len) =
        find_op(text).ok_or_else(|| Error::SqlParse(format!("no operator in `{text}`")))?;
    let lhs = text[..pos].trim();
    let rhs_text = text[pos + len..].trim();
    if lhs.is_empty() {
        return Err(Error::SqlParse(format!("missing column in `{text}`")));
    }
    if rhs_text.is_empty() {
        return Err(Error::SqlParse(format!("missing value in `{text}`")));
    }
    let col = table.resolve_column(lhs)?;
    let rhs = if let Some(inner) = unquote(rhs_text) {
        Rhs::Literal(inner.to_string())
    } else {
        let lower = ascii_lower(rhs_text);
        let ext = if lower.starts_with("min(") && lower.ends_with(')') {
            Some(Extremum::Min)
        } else if lower.starts_with("max(") && lower.ends_with(')') {
            Some(Extremum::Max)
        } else {
            None
        };
        match ext {
            Some(func) => {
                let inner = rhs_text[4..rhs_text.len() - 1].trim();
                let ecol = table.resolve_column(inner)?;
                if table.col_types[ecol] != ColType::Number {
                    return Err(Error::SqlUnsupported(format!(
                        "{} over non-numeric column `{}`",
                        func.as_str(),
                        table.headers[ecol]
                    )));
                }
                Rhs::Extremum { func, col: ecol }
            }
            None => Rhs::Literal(rhs_text.to_string()),
        }
    };
    Ok(Condition { col, op, rhs })
}

/// Render a query back to canonical text. `parse_sql(render(q)) == q`.
pub fn render(table: &Table, query: &Query) -> String {
    let select = match query.agg {
        Some(agg) => format!("{}({})", agg.as_str(), table.headers[query.select_col]),
        None => table.headers[query.select_col].clone(),
    };
    let mut out = format!("select {} from {}", select, query.table_name);
    for (i, c) in query.conditions.iter().enumerate() {
        out.push_str(if i == 0 { " where " } else { " and " });
        let rhs = match &c.rhs {
            Rhs::Literal(v) => format!("'{v}'"),
            Rhs::Extremum { func, col } => {
                format!("{}({})", func.as_str(), table.headers[*col])
            }
        };
        out.push_str(&format!("{} {} {}", table.headers[c.col], c.op.as_str(), rhs));
    }
    out
}

fn cmp_numbers(a: f64, b: f64, op: CmpOp) -> bool {
    match op {
        CmpOp::Eq => approx_eq(a, b),
        CmpOp::Ne => !approx_eq(a, b),
        CmpOp::Lt => a < b && !approx_eq(a, b),
        CmpOp::Le => a < b || approx_eq(a, b),
        CmpOp::Gt => a > b && !approx_eq(a, b),
        CmpOp::Ge => a > b || approx_eq(a, b),
    }
}

fn condition_holds(table: &Table, row: usize, cond: &Condition, rhs_value: &str) -> bool {
    let cell = &table.cells[row][cond.col];
    if let (Some(a), Some(b)) = (cell.as_number(), parse_number(rhs_value)) {
        return cmp_numbers(a, b, cond.op);
    }
    if let (Some(da), Some(db)) = (cell.as_date(), parse_date(rhs_value)) {
        let (ka, kb) = (da.sort_key(), db.sort_key());
        return match cond.op {
            CmpOp::Eq => ka == kb,
            CmpOp::Ne => ka != kb,
            CmpOp::Lt => ka < kb,
            CmpOp::Le => ka <= kb,
            CmpOp::Gt => ka > kb,
            CmpOp::Ge => ka >= kb,
        };
    }
    let equal = normalize_text(&cell.raw) == normalize_text(rhs_value);
    match cond.op {
        CmpOp::Eq => equal,
        CmpOp::Ne => !equal,
        // Order comparisons over non-comparable values select nothing.
        _ => false,
    }
}

fn numeric_column_values(table: &Table, col: usize) -> Vec<f64> {
    table
        .data_rows()
        .filter_map(|r| table.cells[r][col].as_number())
        .collect()
}

/// Execute a query over the table's data rows.
pub fn execute(table: &Table, query: &Query) -> Result<Answer> {
    // Resolve extremum right-hand sides up front.
    let mut rhs_values = Vec::with_capacity(query.conditions.len());
    for cond in &query.conditions {
        let v = match &cond.rhs {
            Rhs::Literal(v) => v.clone(),
            Rhs::Extremum { func, col } => {
                let values = numeric_column_values(table, *col);
                let picked = match func {
                    Extremum::Min => values.iter().cloned().reduce(f64::min),
                    Extremum::Max => values.iter().cloned().reduce(f64::max),
                };
                let picked = picked.ok_or_else(|| {
                    Error::EmptyResult(format!(
                        "{}({})",
                        func.as_str(),
                        table.headers[*col]
                    ))
                })?;
                canonical_number(picked)
            }
        };
        rhs_values.push(v);
    }

    let passing: Vec<usize> = table
        .data_rows()
        .filter(|&r| {
            query
                .conditions
                .iter()
                .zip(&rhs_values)
                .all(|(c, v)| condition_holds(table, r, c, v))
        })
        .collect();

    let col = query.select_col;
    let agg_label = |agg: AggFn| format!("{}({})", agg.as_str(), table.headers[col]);
    match query.agg {
        None => Ok(Answer::List(
            passing
                .iter()
                .map(|&r| table.cells[r][col].raw.trim().to_string())
                .collect(),
        )),
        Some(AggFn::Count) => Ok(Answer::Number(
            passing
                .iter()
                .filter(|&&r| !table.cells[r][col].is_empty())
                .count() as f64,
        )),
        Some(AggFn::Sum) => Ok(Answer::Number(
            passing
                .iter()
                .filter_map(|&r| table.cells[r][col].as_number())
                .sum(),
        )),
        Some(AggFn::Avg) => {
            let values: Vec<f64> = passing
                .iter()
                .filter_map(|&r| table.cells[r][col].as_number())
                .collect();
            if values.is_empty() {
                return Err(Error::EmptyResult(agg_label(AggFn::Avg)));
            }
            Ok(Answer::Number(values.iter().sum::<f64>() / values.len() as f64))
        }
        Some(agg @ (AggFn::Min | AggFn::Max)) => {
            let want_min = agg == AggFn::Min;
            match table.col_types[col] {
                ColType::Number => {
                    let values: Vec<f64> = passing
                        .iter()
                        .filter_map(|&r| table.cells[r][col].as_number())
                        .collect();
                    let picked = if want_min {
                        values.iter().cloned().reduce(f64::min)
                    } else {
                        values.iter().cloned().reduce(f64::max)
                    };
                    picked
                        .map(Answer::Number)
                        .ok_or_else(|| Error::EmptyResult(agg_label(agg)))
                }
                ColType::Date => {
                    let mut dated: Vec<(usize, (i32, u8, u8))> = passing
                        .iter()
                        .filter_map(|&r| {
                            table.cells[r][col].as_date().map(|d| (r, d.sort_key()))
                        })
                        .collect();
                    dated.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
                    let picked = if want_min { dated.first() } else { dated.last() };
                    picked
                        .map(|(r, _)| Answer::Text(table.cells[*r][col].raw.trim().to_string()))
                        .ok_or_else(|| Error::EmptyResult(agg_label(agg)))
                }
                ColType::Text => {
                    let mut keyed: Vec<(String, usize)> = passing
                        .iter()
                        .filter(|&&r| !table.cells[r][col].is_empty())
                        .map(|&r| (normalize_text(&table.cells[r][col].raw), r))
                        .collect();
                    keyed.sort();
                    let picked = if want_min { keyed.first() } else { keyed.last() };
                    picked
                        .map(|(_, r)| Answer::Text(table.cells[*r][col].raw.trim().to_string()))
                        .ok_or_else(|| Error::EmptyResult(agg_label(agg)))
                }
            }
        }
    }
}

/// Variants of a query that replace one literal at a time with a different
/// value from the same column (data rows, first appearance order).
pub fn perturb_query(table: &Table, query: &Query) -> Vec<Query> {
    let mut out = Vec::new();
    for (ci, cond) in query.conditions.iter().enumerate() {
        let Rhs::Literal(current) = &cond.rhs else {
            continue;
        };
        let current_norm = normalize_text(current);
        let mut seen: HashSet<String> = HashSet::new();
        seen.insert(current_norm);
        for r in table.data_rows() {
            let cell = &table.cells[r][cond.col];
            if cell.is_empty() {
                continue;
            }
            let value = cell.raw.trim().to_string();
            if !seen.insert(normalize_text(&value)) {
                continue;
            }
            let mut variant = query.clone();
            variant.conditions[ci].rhs = Rhs::Literal(value);
            out.push(variant);
        }
    }
    out
}

/// Typed slot of a skeleton (`c1_text`, `c2_num`, `c3_date`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotType {
    Text,
    Num,
    Date,
}

impl SlotType {
    pub fn as_str(self) -> &'static str {
        match self {
            SlotType::Text => "text",
            SlotType::Num => "num",
            SlotType::Date => "date",
        }
    }

    fn of(col_type: ColType) -> SlotType {
        match col_type {
            ColType::Text => SlotType::Text,
            ColType::Number => SlotType::Num,
            ColType::Date => SlotType::Date,
        }
    }

    fn col_type(self) -> ColType {
        match self {
            SlotType::Text => ColType::Text,
            SlotType::Num => ColType::Number,
            SlotType::Date => ColType::Date,
        }
    }
}

/// A query/question pair with column names (and literal values) replaced
/// by typed placeholders, reusable against other tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuerySkeleton {
    pub query_template: String,
    pub question_template: String,
    /// Slot i is rendered `c{i+1}_{type}`.
    pub slots: Vec<SlotType>,
}

/// Splice replacements over token spans without any case adjustment.
fn splice_verbatim(
    hyp: &crate::align::Hypothesis,
    reps: &[((usize, usize), String)],
) -> String {
    let mut sorted: Vec<_> = reps.to_vec();
    sorted.sort_by_key(|(span, _)| span.0);
    let mut out = String::new();
    let mut cursor = 0;
    for (span, text) in sorted {
        let (start, end) = hyp.byte_span(span);
        out.push_str(&hyp.text[cursor..start]);
        out.push_str(&text);
        cursor = end;
    }
    out.push_str(&hyp.text[cursor..]);
    out
}

/// Extract a typed skeleton from a parsed query and its question.
///
/// The select column becomes slot 1; condition columns follow in first
/// appearance order. Column mentions in the question (exact or
/// depluralized header tokens) become `C{i}_{type}` and literal mentions
/// become `<c{i}_{type}>`.
pub fn extract_skeleton(table: &Table, query: &Query, question: &str) -> Result<QuerySkeleton> {
    let mut cols: Vec<usize> = vec![query.select_col];
    for c in &query.conditions {
        if !cols.contains(&c.col) {
            cols.push(c.col);
        }
        if let Rhs::Extremum { col, .. } = c.rhs {
            if !cols.contains(&col) {
                cols.push(col);
            }
        }
    }
    let slots: Vec<SlotType> = cols.iter().map(|&c| SlotType::of(table.col_types[c])).collect();
    let placeholder =
        |i: usize, upper: bool| -> String {
            let tag = format!("c{}_{}", i + 1, slots[i].as_str());
            if upper {
                format!("C{}", &tag[1..])
            } else {
                tag
            }
        };
    let slot_of_col = |col: usize| cols.iter().position(|&c| c == col).unwrap();

    // Query template: canonical render with placeholder column names,
    // placeholder literals, and table name `t`.
    let mut qt = format!(
        "select {} from t",
        match query.agg {
            Some(agg) => format!("{}({})", agg.as_str(), placeholder(0, false)),
            None => placeholder(0, false),
        }
    );
    for (i, c) in query.conditions.iter().enumerate() {
        qt.push_str(if i == 0 { " where " } else { " and " });
        let slot = slot_of_col(c.col);
        let rhs = match &c.rhs {
            Rhs::Literal(_) => format!("<{}>", placeholder(slot, false)),
            Rhs::Extremum { func, col } => {
                format!("{}({})", func.as_str(), placeholder(slot_of_col(*col), false))
            }
        };
        qt.push_str(&format!("{} {} {}", placeholder(slot, false), c.op.as_str(), rhs));
    }

    // Question template: replace header and literal mentions.
    let hyp = normalize_tokens(question)?;
    let mut taken = vec![false; hyp.tokens.len()];
    let mut reps: Vec<((usize, usize), String)> = Vec::new();
    let mut patterns: Vec<(Vec<String>, String)> = Vec::new();
    for (i, &col) in cols.iter().enumerate() {
        let toks = normalize_tokens(&table.headers[col])
            .map(|h| h.tokens.into_iter().map(|t| t.text).collect::<Vec<_>>())
            .unwrap_or_default();
        if !toks.is_empty() {
            patterns.push((toks, placeholder(i, true)));
        }
    }
    for c in &query.conditions {
        if let Rhs::Literal(v) = &c.rhs {
            if let Ok(h) = normalize_tokens(v) {
                let toks: Vec<String> = h.tokens.into_iter().map(|t| t.text).collect();
                let slot = slot_of_col(c.col);
                patterns.push((toks, format!("<{}>", placeholder(slot, false))));
            }
        }
    }
    // Longer patterns claim their tokens first.
    patterns.sort_by_key(|(toks, _)| std::cmp::Reverse(toks.len()));
    for (toks, replacement) in &patterns {
        let n = toks.len();
        if n == 0 || n > hyp.tokens.len() {
            continue;
        }
        for start in 0..=hyp.tokens.len() - n {
            let span = (start, start + n);
            if (span.0..span.1).any(|k| taken[k]) {
                continue;
            }
            let matches = (0..n).all(|k| {
                let qt = &hyp.tokens[start + k].text;
                let pt = &toks[k];
                qt == pt || depluralize(qt) == depluralize(pt)
            });
            if matches {
                for k in span.0..span.1 {
                    taken[k] = true;
                }
                reps.push((span, replacement.clone()));
            }
        }
    }
    let question_template = splice_verbatim(&hyp, &reps);

    Ok(QuerySkeleton {
        query_template: qt,
        question_template,
        slots,
    })
}

/// Instantiate a skeleton on a table: slot i binds to the i-th unused
/// column of its type, `<c..>` value markers take the first non-empty
/// value of the bound column. `None` when the table cannot fill the slots.
pub fn instantiate_skeleton(skeleton: &QuerySkeleton, table: &Table) -> Option<(String, String)> {
    let mut used = vec![false; table.n_cols()];
    let mut bound: Vec<usize> = Vec::with_capacity(skeleton.slots.len());
    for slot in &skeleton.slots {
        let want = slot.col_type();
        let col = (0..table.n_cols())
            .find(|&c| !used[c] && table.col_types[c] == want)?;
        used[col] = true;
        bound.push(col);
    }

    let mut query = skeleton.query_template.clone();
    let mut question = skeleton.question_template.clone();
    for (i, (&col, slot)) in bound.iter().zip(&skeleton.slots).enumerate() {
        let tag = format!("c{}_{}", i + 1, slot.as_str());
        let header = table.headers[col].trim().to_lowercase();
        // Value markers first, so plain placeholders do not eat them.
        let marker = format!("<{tag}>");
        if query.contains(&marker) || question.contains(&marker) {
            let value = table
                .data_rows()
                .map(|r| &table.cells[r][col])
                .find(|cell| !cell.is_empty())
                .map(|cell| cell.raw.trim().to_string())?;
            query = query.replace(&marker, &format!("'{value}'"));
            question = question.replace(&marker, &value);
        }
        query = query.replace(&tag, &header);
        let upper = format!("C{}", &tag[1..]);
        while let Some(pos) = question.find(&upper).or_else(|| question.find(&tag)) {
            let found_len = upper.len();
            let mut piece = header.clone();
            if pos == 0 {
                let mut chars = piece.chars();
                if let Some(first) = chars.next() {
                    piece = first.to_uppercase().collect::<String>() + chars.as_str();
                }
            }
            question.replace_range(pos..pos + found_len, &piece);
        }
    }
    Some((query, question))
}

/// Deduplicated collection of skeletons with their source tables.
#[derive(Debug, Default, Clone)]
pub struct SkeletonLibrary {
    pub entries: Vec<(QuerySkeleton, String)>,
    seen: HashSet<(String, String)>,
}

impl SkeletonLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add a skeleton extracted from `source_table_id`; false if an
    /// identical skeleton is already present.
    pub fn add(&mut self, skeleton: QuerySkeleton, source_table_id: &str) -> bool {
        let key = (
            skeleton.query_template.clone(),
            skeleton.question_template.clone(),
        );
        if !self.seen.insert(key) {
            return false;
        }
        self.entries.push((skeleton, source_table_id.to_string()));
        true
    }

    /// Skeletons with their source table ids, in insertion order.
    pub fn entries(&self) -> &[(QuerySkeleton, String)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
