//! Entity alignment between table cells and hypothesis text.
//!
//! Matching runs a fixed cascade per cell — exact token sequence, partial
//! token overlap (longest common subsequence with abbreviation expansion),
//! number-word forms, date components, whole-cell abbreviations — and
//! [`align_all`] then assigns non-overlapping spans greedily in descending
//! score order. Possessive tokens ("Obama's") match their base form and
//! reclassify the alignment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{depluralize, AbbrevMap};
use crate::numword;
use crate::table::{approx_eq, CellValue, ColType, Coord, DateValue, Table};

/// One normalized token: lowercase form (digit-group commas stripped from
/// numbers) plus the byte span of its base form in the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
    /// The original carried a possessive marker ("Obama's", "teams'").
    pub possessive: bool,
}

/// A hypothesis: original text plus its normalized tokens. Token spans are
/// disjoint and increasing, so splicing replacements back over them
/// reconstructs the surrounding text exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub text: String,
    pub tokens: Vec<Token>,
}

/// Which matcher produced an alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchKind {
    Exact,
    PartialToken,
    NumericWord,
    OrdinalWord,
    DateComponent,
    Abbreviation,
    Possessive,
}

impl MatchKind {
    /// Cascade position, used only to break score ties deterministically.
    fn rank(self) -> u8 {
        match self {
            MatchKind::Exact => 0,
            MatchKind::Possessive => 1,
            MatchKind::PartialToken => 2,
            MatchKind::NumericWord => 3,
            MatchKind::OrdinalWord => 3,
            MatchKind::DateComponent => 4,
            MatchKind::Abbreviation => 5,
        }
    }
}

/// A cell aligned to a token span of the hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    pub cell: Coord,
    /// Token index range `[start, end)`.
    pub span: (usize, usize),
    pub kind: MatchKind,
    /// Matched-token coverage of the cell (1.0 for exact matches).
    pub score: f64,
}

/// All alignments for one hypothesis; `complete` means every relevant cell
/// found a span.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentSet {
    pub alignments: Vec<Alignment>,
    pub complete: bool,
}

impl AlignmentSet {
    /// The single source row shared by all non-aggregate alignments, if the
    /// set is row-grouped. `None` when alignments straddle several data rows
    /// or none are row-grounded.
    pub fn grouped_row(&self, table: &Table) -> Option<usize> {
        let mut row = None;
        for a in &self.alignments {
            if table.is_aggregate_row(a.cell.row) {
                continue;
            }
            match row {
                None => row = Some(a.cell.row),
                Some(r) if r == a.cell.row => {}
                Some(_) => return None,
            }
        }
        row
    }
}

/// Direction of a superlative phrase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Max,
    Min,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Max => Direction::Min,
            Direction::Min => Direction::Max,
        }
    }
}

/// A superlative word bound to a numeric column, before anchoring.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperlativeSpan {
    /// Token index range covering the superlative word.
    pub span: (usize, usize),
    pub direction: Direction,
    pub column: usize,
}

/// A superlative anchored at a data row: carries the dense rank of that
/// row's value in the bound column. `direction = max` with `rank = 1` means
/// the anchor row holds the column maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperlativeAlignment {
    pub span: (usize, usize),
    pub direction: Direction,
    pub column: usize,
    pub rank: usize,
}

const SUPERLATIVE_WORDS: [(&str, Direction); 8] = [
    ("most", Direction::Max),
    ("highest", Direction::Max),
    ("maximum", Direction::Max),
    ("largest", Direction::Max),
    ("least", Direction::Min),
    ("lowest", Direction::Min),
    ("minimum", Direction::Min),
    ("smallest", Direction::Min),
];

/// Tokenize and normalize hypothesis text. Splits on anything that is not
/// alphanumeric, keeps digit-group punctuation inside numbers ("1,235" is
/// one token normalized to "1235"), strips possessive markers, and records
/// byte spans. Empty input is an error.
pub fn normalize_tokens(text: &str) -> Result<Hypothesis> {
    let bytes = text.as_bytes();
    let mut tokens: Vec<Token> = Vec::new();
    let mut start: Option<usize> = None;
    let mut iter = text.char_indices().peekable();
    while let Some((i, ch)) = iter.next() {
        let glue = (ch == ',' || ch == '.')
            && i > 0
            && bytes[i - 1].is_ascii_digit()
            && iter.peek().is_some_and(|(_, next)| next.is_ascii_digit());
        if ch.is_alphanumeric() || glue {
            if start.is_none() {
                start = Some(i);
            }
        } else if let Some(s) = start.take() {
            push_token(text, s, i, &mut tokens);
        }
    }
    if let Some(s) = start {
        push_token(text, s, text.len(), &mut tokens);
    }

    // Fold possessive markers: a token followed by an apostrophe and a bare
    // "s" token, or a token ending right before a lone apostrophe.
    let mut folded: Vec<Token> = Vec::with_capacity(tokens.len());
    let mut skip_next = false;
    for i in 0..tokens.len() {
        if skip_next {
            skip_next = false;
            continue;
        }
        let mut tok = tokens[i].clone();
        let gap_end = tokens.get(i + 1).map_or(text.len(), |t| t.start);
        let gap = &text[tok.end..gap_end];
        if let Some(next) = tokens.get(i + 1) {
            if next.text == "s" && (gap == "'" || gap == "\u{2019}") {
                tok.possessive = true;
                skip_next = true;
            }
        }
        if !tok.possessive && (gap.starts_with('\'') || gap.starts_with('\u{2019}')) {
            tok.possessive = true;
        }
        folded.push(tok);
    }

    if folded.is_empty() {
        return Err(Error::EmptyHypothesis);
    }
    Ok(Hypothesis {
        text: text.to_string(),
        tokens: folded,
    })
}

fn push_token(text: &str, start: usize, end: usize, tokens: &mut Vec<Token>) {
    let raw = &text[start..end];
    // Trim glue punctuation that ended up at the token edge ("1,").
    let raw = raw.trim_end_matches([',', '.']);
    if raw.is_empty() {
        return;
    }
    let end = start + raw.len();
    let lowered = raw.to_lowercase();
    let text_norm = if raw.chars().any(|c| c.is_ascii_digit())
        && raw
            .chars()
            .all(|c| c.is_ascii_digit() || c == ',' || c == '.')
    {
        lowered.replace(',', "")
    } else {
        lowered
    };
    tokens.push(Token {
        text: text_norm,
        start,
        end,
        possessive: false,
    });
}

impl Hypothesis {
    /// Byte span covered by a token range.
    pub fn byte_span(&self, span: (usize, usize)) -> (usize, usize) {
        (self.tokens[span.0].start, self.tokens[span.1 - 1].end)
    }

    /// Original text under a token range.
    pub fn span_text(&self, span: (usize, usize)) -> &str {
        let (s, e) = self.byte_span(span);
        &self.text[s..e]
    }

    /// Splice replacements over token ranges, preserving everything between
    /// them. Ranges must be disjoint; each replacement inherits the
    /// capitalization pattern of the span it covers.
    pub fn render_with(&self, replacements: &[((usize, usize), String)]) -> String {
        let mut reps: Vec<(usize, usize, &str, (usize, usize))> = replacements
            .iter()
            .map(|(span, s)| {
                let (bs, be) = self.byte_span(*span);
                (bs, be, s.as_str(), *span)
            })
            .collect();
        reps.sort_by_key(|r| r.0);
        let mut out = String::with_capacity(self.text.len());
        let mut cursor = 0;
        for (bs, be, replacement, span) in reps {
            debug_assert!(bs >= cursor, "overlapping replacement spans");
            out.push_str(&self.text[cursor..bs]);
            out.push_str(&match_capitalization(self.span_text(span), replacement));
            cursor = be;
        }
        out.push_str(&self.text[cursor..]);
        out
    }
}

/// Carry the original span's capitalization onto a replacement: all-caps
/// stays all-caps, a leading capital stays a leading capital, and a
/// lowercase span lowercases a single leading capital.
fn match_capitalization(original: &str, replacement: &str) -> String {
    let letters: Vec<char> = original.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.len() > 1 && letters.iter().all(|c| c.is_uppercase()) {
        return replacement.to_uppercase();
    }
    let mut chars = replacement.chars();
    let first = match chars.next() {
        Some(c) => c,
        None => return String::new(),
    };
    let rest: String = chars.collect();
    match letters.first() {
        Some(c) if c.is_uppercase() && first.is_lowercase() => {
            format!("{}{}", first.to_uppercase(), rest)
        }
        Some(c) if c.is_lowercase() && first.is_uppercase() && !rest.chars().any(|c| c.is_uppercase()) => {
            format!("{}{}", first.to_lowercase(), rest)
        }
        _ => replacement.to_string(),
    }
}

/// Pre-computed matchable forms of one cell.
struct CellForms {
    /// Token-sequence variants for exact matching (raw tokens, canonical
    /// number rendering).
    exact: Vec<Vec<String>>,
    tokens: Vec<String>,
    number: Option<f64>,
    date: Option<DateValue>,
}

fn cell_forms(cell: &CellValue) -> Option<CellForms> {
    let hyp = normalize_tokens(&cell.raw).ok()?;
    let tokens: Vec<String> = hyp.tokens.into_iter().map(|t| t.text).collect();
    let mut exact = vec![tokens.clone()];
    let number = cell.as_number();
    if let Some(n) = number {
        let canonical = canonical_number(n);
        if exact[0] != [canonical.clone()] {
            exact.push(vec![canonical]);
        }
    }
    Some(CellForms {
        exact,
        tokens,
        number,
        date: cell.as_date(),
    })
}

/// Canonical digit rendering: integers without a fraction, minimal float
/// form otherwise.
pub fn canonical_number(n: f64) -> String {
    if n.fract() == 0.0 && n.abs() < 1e15 {
        format!("{}", n as i64)
    } else {
        format!("{n}")
    }
}

/// Match one cell against a hypothesis, trying matchers in cascade order:
/// exact → partial token → number words → date components → abbreviation.
/// Returns the best span for the first matcher that fires, or `None`.
pub fn match_cell(
    cell: &CellValue,
    at: Coord,
    hyp: &Hypothesis,
    abbrev: &AbbrevMap,
) -> Option<Alignment> {
    if cell.is_empty() {
        return None;
    }
    let forms = cell_forms(cell)?;
    let window: Vec<&str> = hyp.tokens.iter().map(|t| t.text.as_str()).collect();

    let found = match_exact(&forms, &window)
        .or_else(|| match_partial(&forms, &window, abbrev))
        .or_else(|| match_number_words(&forms, &window))
        .or_else(|| match_date(&forms, &window))
        .or_else(|| match_abbreviation(&forms, &window, abbrev));

    found.map(|(span, kind, score)| {
        let possessive = hyp.tokens[span.0..span.1].iter().any(|t| t.possessive);
        Alignment {
            cell: at,
            span,
            kind: if possessive { MatchKind::Possessive } else { kind },
            score,
        }
    })
}

type Found = ((usize, usize), MatchKind, f64);

fn match_exact(forms: &CellForms, window: &[&str]) -> Option<Found> {
    for variant in &forms.exact {
        if variant.is_empty() {
            continue;
        }
        for start in 0..window.len().saturating_sub(variant.len() - 1) {
            if window[start..start + variant.len()]
                .iter()
                .zip(variant)
                .all(|(w, v)| *w == v)
            {
                return Some(((start, start + variant.len()), MatchKind::Exact, 1.0));
            }
        }
    }
    None
}

/// Longest common subsequence between cell tokens and a window, counting
/// matched *cell* tokens; abbreviation expansion applies in both directions
/// ("us" consumes "united states" and vice versa).
fn lcs_matched(cell: &[String], window: &[&str], abbrev: &AbbrevMap) -> usize {
    let n = cell.len();
    let m = window.len();
    let mut dp = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            let mut best = dp[i + 1][j].max(dp[i][j + 1]);
            if cell[i] == window[j] {
                best = best.max(1 + dp[i + 1][j + 1]);
            }
            if let Some(exp) = abbrev.expansion(&cell[i]) {
                let k = exp.len();
                if j + k <= m && window[j..j + k].iter().zip(exp).all(|(w, e)| *w == e) {
                    best = best.max(1 + dp[i + 1][j + k]);
                }
            }
            if let Some(exp) = abbrev.expansion(window[j]) {
                let k = exp.len();
                if i + k <= n && cell[i..i + k].iter().zip(exp).all(|(c, e)| c == e) {
                    best = best.max(k + dp[i + k][j + 1]);
                }
            }
            dp[i][j] = best;
        }
    }
    dp[0][0]
}

fn match_partial(forms: &CellForms, window: &[&str], abbrev: &AbbrevMap) -> Option<Found> {
    let cell = &forms.tokens;
    if cell.is_empty() {
        return None;
    }
    let max_len = (cell.len() + 2).min(window.len());
    let mut best: Option<(f64, usize, usize)> = None; // score, len, start
    for len in 1..=max_len {
        for start in 0..=window.len() - len {
            let win = &window[start..start + len];
            let matched = lcs_matched(cell, win, abbrev);
            if matched == 0 {
                continue;
            }
            // Tight windows only: both boundary tokens must contribute.
            if len > 1
                && (lcs_matched(cell, &win[1..], abbrev) == matched
                    || lcs_matched(cell, &win[..len - 1], abbrev) == matched)
            {
                continue;
            }
            let coverage = matched as f64 / cell.len() as f64;
            if coverage < 0.5 {
                continue;
            }
            let long_single = matched == 1
                && win
                    .iter()
                    .any(|w| cell.iter().any(|c| c == w) && w.chars().count() >= 4);
            if matched < 2 && !long_single {
                continue;
            }
            let better = match best {
                None => true,
                Some((s, l, st)) => {
                    coverage > s || (coverage == s && (len < l || (len == l && start < st)))
                }
            };
            if better {
                best = Some((coverage, len, start));
            }
        }
    }
    best.map(|(score, len, start)| ((start, start + len), MatchKind::PartialToken, score))
}

fn match_number_words(forms: &CellForms, window: &[&str]) -> Option<Found> {
    let n = forms.number?;
    if n.fract() != 0.0 || n < 0.0 {
        return None;
    }
    let int = n as u64;
    let word_forms = u32::try_from(int).ok().filter(|v| *v <= 100);

    // Cardinal words first.
    if let Some(words) = word_forms.and_then(numword::cardinal_words) {
        if let Some(start) = find_seq(window, &words) {
            return Some(((start, start + words.len()), MatchKind::NumericWord, 1.0));
        }
    }
    // Ordinal words ("forty fourth").
    if let Some(words) = word_forms.and_then(numword::ordinal_words) {
        if let Some(start) = find_seq(window, &words) {
            return Some(((start, start + words.len()), MatchKind::OrdinalWord, 1.0));
        }
    }
    // Digit-ordinal tokens ("44th") work for any integer.
    for (i, tok) in window.iter().enumerate() {
        if tok.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            if let Some((v, 1)) = numword::parse_ordinal(&[tok]) {
                if u64::from(v) == int {
                    return Some(((i, i + 1), MatchKind::OrdinalWord, 1.0));
                }
            }
        }
    }
    None
}

fn find_seq(window: &[&str], seq: &[String]) -> Option<usize> {
    if seq.is_empty() || seq.len() > window.len() {
        return None;
    }
    (0..=window.len() - seq.len())
        .find(|&start| window[start..start + seq.len()].iter().zip(seq).all(|(w, s)| *w == s))
}

fn match_date(forms: &CellForms, window: &[&str]) -> Option<Found> {
    let date = forms.date?;
    let component = |tok: &str| -> Option<u8> {
        // Returns a component class: 0 year, 1 month, 2 day.
        if tok == date.year.to_string() {
            return Some(0);
        }
        if let Some(m) = date.month {
            let name = MONTH_NAMES[(m - 1) as usize];
            if tok == name || (tok.len() == 3 && name.starts_with(tok)) {
                return Some(1);
            }
        }
        if let Some(d) = date.day {
            if tok == d.to_string() {
                return Some(2);
            }
        }
        None
    };
    let present = 1 + date.month.is_some() as usize + date.day.is_some() as usize;
    let mut best: Option<(usize, usize, usize)> = None; // distinct, len, start
    let mut i = 0;
    while i < window.len() {
        if component(window[i]).is_none() {
            i += 1;
            continue;
        }
        // Maximal run of component tokens starting here.
        let mut j = i;
        let mut seen = [false; 3];
        while j < window.len() {
            match component(window[j]) {
                Some(c) => {
                    seen[c as usize] = true;
                    j += 1;
                }
                None => break,
            }
        }
        let distinct = seen.iter().filter(|s| **s).count();
        let better = match best {
            None => true,
            Some((d, l, _)) => distinct > d || (distinct == d && (j - i) > l),
        };
        if better {
            best = Some((distinct, j - i, i));
        }
        i = j;
    }
    best.map(|(distinct, len, start)| {
        (
            (start, start + len),
            MatchKind::DateComponent,
            distinct as f64 / present as f64,
        )
    })
}

pub(crate) const MONTH_NAMES: [&str; 12] = [
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

fn match_abbreviation(forms: &CellForms, window: &[&str], abbrev: &AbbrevMap) -> Option<Found> {
    let joined = forms.tokens.join(" ");
    if let Some(exp) = abbrev.expansion(&joined) {
        if let Some(start) = find_seq(window, exp) {
            return Some(((start, start + exp.len()), MatchKind::Abbreviation, 1.0));
        }
    }
    if let Some(short) = abbrev.contraction(&joined) {
        if let Some(i) = window.iter().position(|w| *w == short) {
            return Some(((i, i + 1), MatchKind::Abbreviation, 1.0));
        }
    }
    None
}

/// Align every relevant cell against a hypothesis, then keep a
/// non-overlapping assignment: proposals are sorted by descending score
/// (ties broken by matcher rank, then cell position, then span start) and
/// taken greedily; a cell losing its span stays unaligned rather than
/// erroring.
pub fn align_all(
    table: &Table,
    relevant: &[Coord],
    hyp: &Hypothesis,
    abbrev: &AbbrevMap,
) -> Result<AlignmentSet> {
    let mut proposals = Vec::new();
    for &coord in relevant {
        let cell = table.cell(coord)?;
        if let Some(a) = match_cell(cell, coord, hyp, abbrev) {
            proposals.push(a);
        }
    }
    proposals.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap()
            .then(a.kind.rank().cmp(&b.kind.rank()))
            .then(a.cell.cmp(&b.cell))
            .then(a.span.0.cmp(&b.span.0))
    });
    let mut taken: Vec<(usize, usize)> = Vec::new();
    let mut alignments = Vec::new();
    for a in proposals {
        let overlaps = taken.iter().any(|(s, e)| a.span.0 < *e && *s < a.span.1);
        if !overlaps {
            taken.push(a.span);
            alignments.push(a);
        }
    }
    alignments.sort_by_key(|a| a.span.0);
    let complete = relevant.len() == alignments.len();
    Ok(AlignmentSet {
        alignments,
        complete,
    })
}

/// Align a hypothesis against *every* cell of the table, keeping whatever
/// sticks. Used when no relevant-cell annotation exists (question answering
/// sources): the discovered set is complete by construction, since there is
/// no external list of cells that were supposed to match.
pub fn discover_alignments(table: &Table, hyp: &Hypothesis, abbrev: &AbbrevMap) -> AlignmentSet {
    let all: Vec<Coord> = (0..table.cells.len())
        .flat_map(|row| (0..table.headers.len()).map(move |col| Coord { row, col }))
        .collect();
    let mut set =
        align_all(table, &all, hyp, abbrev).expect("enumerated coordinates are in bounds");
    set.complete = true;
    set
}

/// Detect superlative phrases: one of {most, least, highest, lowest,
/// maximum, minimum, largest, smallest} within three tokens of a word that
/// depluralizes to a numeric column's header word. The nearest such header
/// word wins; among equally near columns the leftmost wins.
pub fn detect_superlatives(hyp: &Hypothesis, table: &Table) -> Vec<SuperlativeSpan> {
    let numeric_cols: Vec<(usize, Vec<String>)> = table
        .col_types
        .iter()
        .enumerate()
        .filter(|(_, t)| **t == ColType::Number)
        .map(|(c, _)| {
            let words = normalize_tokens(&table.headers[c])
                .map(|h| {
                    h.tokens
                        .into_iter()
                        .map(|t| depluralize(&t.text).to_string())
                        .collect()
                })
                .unwrap_or_default();
            (c, words)
        })
        .collect();
    if numeric_cols.is_empty() {
        return Vec::new();
    }

    let mut found = Vec::new();
    for (i, tok) in hyp.tokens.iter().enumerate() {
        let direction = match SUPERLATIVE_WORDS.iter().find(|(w, _)| *w == tok.text) {
            Some((_, d)) => *d,
            None => continue,
        };
        let mut best: Option<(usize, usize)> = None; // (distance, column)
        for (j, other) in hyp.tokens.iter().enumerate() {
            if j == i {
                continue;
            }
            let dist = i.abs_diff(j);
            if dist > 3 {
                continue;
            }
            let stem = depluralize(&other.text);
            for (col, words) in &numeric_cols {
                if words.iter().any(|w| w == stem) {
                    let better = match best {
                        None => true,
                        Some((d, c)) => dist < d || (dist == d && *col < c),
                    };
                    if better {
                        best = Some((dist, *col));
                    }
                }
            }
        }
        if let Some((_, column)) = best {
            found.push(SuperlativeSpan {
                span: (i, i + 1),
                direction,
                column,
            });
        }
    }
    found
}

/// Dense rank of a row's value within a numeric column over non-aggregate
/// rows: values sort best-first for the direction and ties share a rank.
/// `None` when the anchor cell is not numeric.
pub fn dense_rank(table: &Table, column: usize, direction: Direction, row: usize) -> Option<usize> {
    let value = table.cells.get(row)?.get(column)?.as_number()?;
    let mut values: Vec<f64> = table
        .data_rows()
        .filter_map(|r| table.cells[r][column].as_number())
        .collect();
    match direction {
        Direction::Max => values.sort_by(|a, b| b.partial_cmp(a).unwrap()),
        Direction::Min => values.sort_by(|a, b| a.partial_cmp(b).unwrap()),
    }
    let mut rank = 0;
    let mut prev: Option<f64> = None;
    for v in values {
        if prev.map_or(true, |p| !approx_eq(p, v)) {
            rank += 1;
            prev = Some(v);
        }
        if approx_eq(v, value) {
            return Some(rank);
        }
    }
    None
}

impl SuperlativeSpan {
    /// Anchor at a data row, computing the rank of that row's value.
    pub fn anchored(&self, table: &Table, row: usize) -> Option<SuperlativeAlignment> {
        dense_rank(table, self.column, self.direction, row).map(|rank| SuperlativeAlignment {
            span: self.span,
            direction: self.direction,
            column: self.column,
            rank,
        })
    }
}
