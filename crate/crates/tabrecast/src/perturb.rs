//! Hypothesis perturbation.
//!
//! Starting from a base hypothesis whose mentions are aligned to cells,
//! this module mints:
//!
//! * **entailments** — every aligned mention replaced row-consistently
//!   with the values of another data row, superlative phrases rewritten
//!   to that row's dense rank;
//! * **contradictions** — subsets of aligned mentions replaced with
//!   same-column values, each candidate checked against the tuple-match
//!   guard so that accidentally-true hypotheses are never labeled
//!   contradict;
//! * **antonym contradictions** — gradable words swapped for lexicon
//!   antonyms, guarded through flipped rank constraints when the word is
//!   a column-bound superlative.

use std::collections::HashSet;

use crate::align::{
    canonical_number, dense_rank, AlignmentSet, Hypothesis, MatchKind, SuperlativeSpan,
    MONTH_NAMES,
};
use crate::error::{Error, Result};
use crate::instance::{Label, Lineage, NliInstance, OpKind, SourceTask, Substitution, Variant};
use crate::lexicon::AntonymLexicon;
use crate::numword::{cardinal_words, digit_ordinal, ordinal_words};
use crate::oracle::{constraints_hold, AggPair, RankConstraint, TupleConstraints, ValuePair};
use crate::table::{candidate_pool, column_candidates, CellValue, Coord, DateValue, Table};

/// Everything a generation pass needs besides the hypothesis itself.
#[derive(Debug, Clone)]
pub struct PerturbContext<'a> {
    pub table: &'a Table,
    pub variant: Variant,
    /// Id of the base instance derived instances point back to.
    pub base_id: String,
    pub source_task: SourceTask,
}

/// Verdict of the accidental-entailment guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardDecision {
    Accept,
    Reject,
}

/// Reject a contradiction candidate whose `(column, value)` tuple still
/// holds in some single data row. The empty tuple is vacuously true and
/// therefore rejected.
pub fn guard_accidental_entailment(table: &Table, tuple: &[(usize, String)]) -> GuardDecision {
    let constraints = TupleConstraints {
        values: tuple
            .iter()
            .map(|(col, value)| ValuePair {
                col: *col,
                value: value.clone(),
            })
            .collect(),
        ..Default::default()
    };
    if constraints_hold(table, &constraints) {
        GuardDecision::Reject
    } else {
        GuardDecision::Accept
    }
}

/// Rephrase a superlative word for a dense rank: rank 1 keeps the word,
/// ranks 2 and 3 prefix "second"/"third", deeper ranks are not rendered.
pub fn rank_rewrite(rank: usize, word: &str) -> Option<String> {
    match rank {
        1 => Some(word.to_string()),
        2 => Some(format!("second {word}")),
        3 => Some(format!("third {word}")),
        _ => None,
    }
}

/// Surface text for splicing `replacement` over a span that was matched
/// with `kind`. `None` means the replacement cannot be rendered in that
/// style (for example a year-only date standing in for a full date).
fn surface_for(
    kind: MatchKind,
    source: &CellValue,
    replacement: &CellValue,
    hyp: &Hypothesis,
    span: (usize, usize),
) -> Option<String> {
    match kind {
        MatchKind::Exact
        | MatchKind::PartialToken
        | MatchKind::Possessive
        | MatchKind::Abbreviation => Some(replacement.raw.trim().to_string()),
        MatchKind::NumericWord => {
            let n = replacement.as_number()?;
            if n >= 0.0 && n.fract() == 0.0 && n <= 100.0 {
                Some(cardinal_words(n as u32)?.join(" "))
            } else {
                Some(canonical_number(n))
            }
        }
        MatchKind::OrdinalWord => {
            let n = replacement.as_number()?;
            if n < 0.0 || n.fract() != 0.0 {
                return None;
            }
            if n <= 100.0 {
                Some(ordinal_words(n as u32)?.join(" "))
            } else {
                Some(digit_ordinal(n as u64))
            }
        }
        MatchKind::DateComponent => {
            let src = source.as_date()?;
            let dst = replacement.as_date()?;
            date_surface(hyp, span, &src, &dst)
        }
    }
}

/// Rebuild a date-component span token by token: each source component is
/// swapped for the destination date's same component, separators kept.
fn date_surface(
    hyp: &Hypothesis,
    span: (usize, usize),
    src: &DateValue,
    dst: &DateValue,
) -> Option<String> {
    let mut out = String::new();
    for i in span.0..span.1 {
        let tok = &hyp.tokens[i];
        let piece = if tok.text == src.year.to_string() {
            dst.year.to_string()
        } else if src.month.is_some_and(|m| {
            let name = MONTH_NAMES[(m - 1) as usize];
            tok.text == name || (tok.text.len() == 3 && name.starts_with(&tok.text))
        }) {
            let name = MONTH_NAMES[(dst.month? - 1) as usize];
            let original = &hyp.text[tok.start..tok.end];
            if original.chars().next().is_some_and(|c| c.is_uppercase()) {
                let mut chars = name.chars();
                match chars.next() {
                    Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
                    None => String::new(),
                }
            } else {
                name.to_string()
            }
        } else if src.day.is_some_and(|d| tok.text == d.to_string()) {
            dst.day?.to_string()
        } else {
            return None;
        };
        out.push_str(&piece);
        if i + 1 < span.1 {
            out.push_str(&hyp.text[tok.end..hyp.tokens[i + 1].start]);
        }
    }
    Some(out)
}

/// Value pairs and aggregate pairs of the *unmodified* alignment set.
fn alignment_constraints(table: &Table, aset: &AlignmentSet) -> TupleConstraints {
    let mut c = TupleConstraints::default();
    for a in &aset.alignments {
        let cell = &table.cells[a.cell.row][a.cell.col];
        if table.is_aggregate_row(a.cell.row) {
            c.agg_values.push(AggPair {
                row: a.cell.row,
                col: a.cell.col,
                value: cell.raw.trim().to_string(),
            });
        } else {
            c.values.push(ValuePair {
                col: a.cell.col,
                value: cell.raw.trim().to_string(),
            });
        }
    }
    c
}

fn make_instance(
    ctx: &PerturbContext,
    op: OpKind,
    hypothesis: String,
    label: Label,
    substitutions: Vec<Substitution>,
    constraints: Option<TupleConstraints>,
) -> NliInstance {
    let mut lineage = Lineage::new(op, ctx.source_task);
    lineage.base_id = ctx.base_id.clone();
    lineage.substitutions = substitutions;
    lineage.constraints = constraints;
    NliInstance {
        id: String::new(),
        table_id: ctx.table.id.clone(),
        variant: ctx.variant,
        hypothesis,
        label,
        lineage,
    }
}

/// Wrap the base hypothesis itself as an entailment instance. Constraints
/// are recorded when the alignment set is row-consistent; a base with no
/// alignments at all is flagged low-confidence.
pub fn base_instance(
    ctx: &PerturbContext,
    base: &Hypothesis,
    aset: &AlignmentSet,
    supers: &[SuperlativeSpan],
) -> NliInstance {
    let table = ctx.table;
    let x = aset.grouped_row(table);
    let has_row = aset
        .alignments
        .iter()
        .any(|a| !table.is_aggregate_row(a.cell.row));
    let mut constraints = None;
    if !aset.alignments.is_empty() && (!has_row || x.is_some()) {
        let mut c = alignment_constraints(table, aset);
        if let Some(anchor) = x {
            for sp in supers {
                if let Some(rank) = dense_rank(table, sp.column, sp.direction, anchor) {
                    c.ranks.push(RankConstraint {
                        col: sp.column,
                        direction: sp.direction,
                        rank,
                    });
                }
            }
        }
        constraints = Some(c);
    }
    let mut inst = make_instance(
        ctx,
        OpKind::Identity,
        base.text.clone(),
        Label::Entail,
        Vec::new(),
        constraints,
    );
    inst.lineage.low_confidence = aset.alignments.is_empty();
    inst
}

/// Generate entailments by replacing every aligned mention with the values
/// of one alternative data row at a time, in ascending row order.
///
/// Requires a complete alignment set. Rows are skipped when any target
/// cell is empty or type-mismatched, a superlative rank is missing or
/// deeper than third, or the rendered text duplicates an earlier one.
/// Aggregate-grounded mentions are left intact.
pub fn generate_entailments(
    ctx: &PerturbContext,
    base: &Hypothesis,
    aset: &AlignmentSet,
    supers: &[SuperlativeSpan],
    limit: usize,
) -> Result<Vec<NliInstance>> {
    if !aset.complete {
        return Err(Error::Usage(
            "entailment generation requires a complete alignment set".into(),
        ));
    }
    let table = ctx.table;
    let row_aligned: Vec<_> = aset
        .alignments
        .iter()
        .filter(|a| !table.is_aggregate_row(a.cell.row))
        .collect();
    let agg_aligned: Vec<_> = aset
        .alignments
        .iter()
        .filter(|a| table.is_aggregate_row(a.cell.row))
        .collect();
    if row_aligned.is_empty() {
        return Ok(Vec::new());
    }
    let Some(anchor) = aset.grouped_row(table) else {
        // Mentions straddle several rows; no row-consistent rewrite exists.
        return Ok(Vec::new());
    };

    let mut out = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    seen.insert(base.text.clone());
    'rows: for z in table.data_rows() {
        if z == anchor || out.len() >= limit {
            if out.len() >= limit {
                break;
            }
            continue;
        }
        let mut reps: Vec<((usize, usize), String)> = Vec::new();
        let mut subs: Vec<Substitution> = Vec::new();
        let mut constraints = TupleConstraints::default();
        for a in &row_aligned {
            let src = table.cell(a.cell)?;
            let dst_coord = Coord::new(z, a.cell.col);
            let dst = table.cell(dst_coord)?;
            if dst.col_type() != Some(table.col_types[a.cell.col]) {
                continue 'rows;
            }
            let Some(surface) = surface_for(a.kind, src, dst, base, a.span) else {
                continue 'rows;
            };
            reps.push((a.span, surface.clone()));
            subs.push(Substitution {
                cell: a.cell,
                replacement: dst_coord,
                surface,
            });
            constraints.values.push(ValuePair {
                col: a.cell.col,
                value: dst.raw.trim().to_string(),
            });
        }
        let mut op = OpKind::SubstituteAll;
        for sp in supers {
            let Some(rank) = dense_rank(table, sp.column, sp.direction, z) else {
                continue 'rows;
            };
            let word = base.span_text(sp.span).to_string();
            let Some(phrase) = rank_rewrite(rank, &word) else {
                continue 'rows;
            };
            if phrase != word {
                op = OpKind::RankRewrite;
                reps.push((sp.span, phrase));
            }
            constraints.ranks.push(RankConstraint {
                col: sp.column,
                direction: sp.direction,
                rank,
            });
        }
        for a in &agg_aligned {
            let cell = table.cell(a.cell)?;
            constraints.agg_values.push(AggPair {
                row: a.cell.row,
                col: a.cell.col,
                value: cell.raw.trim().to_string(),
            });
        }
        let text = base.render_with(&reps);
        if !seen.insert(text.clone()) {
            continue;
        }
        out.push(make_instance(
            ctx,
            op,
            text,
            Label::Entail,
            subs,
            Some(constraints),
        ));
    }
    Ok(out)
}

/// Hard cap on substitution combinations examined per base hypothesis,
/// so degenerate tables cannot stall a batch run.
const MAX_COMBOS: usize = 20_000;

/// Generate contradictions by substituting subsets of aligned mentions.
///
/// Subsets are enumerated by ascending size then lexicographic member
/// order; candidate values come from the same column (other data rows for
/// row-grounded mentions, all data rows for aggregate-grounded ones) in
/// ascending row order. Every candidate runs through the tuple-match
/// guard; hypotheses that still hold are discarded.
pub fn generate_contradictions(
    ctx: &PerturbContext,
    base: &Hypothesis,
    aset: &AlignmentSet,
    supers: &[SuperlativeSpan],
    limit: usize,
) -> Result<Vec<NliInstance>> {
    let table = ctx.table;
    let alignments = &aset.alignments;
    if alignments.is_empty() || limit == 0 {
        return Ok(Vec::new());
    }
    let has_row = alignments
        .iter()
        .any(|a| !table.is_aggregate_row(a.cell.row));
    let anchor = aset.grouped_row(table);
    if has_row && anchor.is_none() {
        // A mixed-row base has no single-row tuple reading to negate.
        return Ok(Vec::new());
    }

    let mut cands: Vec<Vec<Coord>> = Vec::with_capacity(alignments.len());
    for a in alignments {
        if table.is_aggregate_row(a.cell.row) {
            cands.push(column_candidates(table, a.cell.col, None));
        } else {
            cands.push(candidate_pool(table, a.cell)?.candidates);
        }
    }

    // Rank constraints implied by the base wording, anchored at the base row.
    let mut base_ranks = Vec::new();
    if let Some(x) = anchor {
        for sp in supers {
            if let Some(rank) = dense_rank(table, sp.column, sp.direction, x) {
                base_ranks.push(RankConstraint {
                    col: sp.column,
                    direction: sp.direction,
                    rank,
                });
            }
        }
    }

    let mut out = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    seen.insert(base.text.clone());
    let mut examined = 0usize;
    let n = alignments.len();
    'sizes: for size in 1..=n {
        for subset in combinations(n, size) {
            let lists: Vec<&[Coord]> = subset.iter().map(|&i| cands[i].as_slice()).collect();
            if lists.iter().any(|l| l.is_empty()) {
                continue;
            }
            let lens: Vec<usize> = lists.iter().map(|l| l.len()).collect();
            let mut idx = vec![0usize; size];
            loop {
                examined += 1;
                if examined > MAX_COMBOS {
                    break 'sizes;
                }
                let mut reps: Vec<((usize, usize), String)> = Vec::new();
                let mut subs: Vec<Substitution> = Vec::new();
                let mut constraints = TupleConstraints {
                    ranks: base_ranks.clone(),
                    ..Default::default()
                };
                let mut renderable = true;
                for (ai, a) in alignments.iter().enumerate() {
                    let chosen = subset.iter().position(|&s| s == ai);
                    let value_coord = match chosen {
                        Some(pos) => lists[pos][idx[pos]],
                        None => a.cell,
                    };
                    let vcell = table.cell(value_coord)?;
                    if chosen.is_some() {
                        let src = table.cell(a.cell)?;
                        let Some(surface) = surface_for(a.kind, src, vcell, base, a.span) else {
                            renderable = false;
                            break;
                        };
                        reps.push((a.span, surface.clone()));
                        subs.push(Substitution {
                            cell: a.cell,
                            replacement: value_coord,
                            surface,
                        });
                    }
                    if table.is_aggregate_row(a.cell.row) {
                        constraints.agg_values.push(AggPair {
                            row: a.cell.row,
                            col: a.cell.col,
                            value: vcell.raw.trim().to_string(),
                        });
                    } else {
                        constraints.values.push(ValuePair {
                            col: a.cell.col,
                            value: vcell.raw.trim().to_string(),
                        });
                    }
                }
                if renderable && !constraints_hold(table, &constraints) {
                    let text = base.render_with(&reps);
                    if seen.insert(text.clone()) {
                        out.push(make_instance(
                            ctx,
                            OpKind::SubstituteSome,
                            text,
                            Label::Contradict,
                            subs,
                            Some(constraints),
                        ));
                        if out.len() >= limit {
                            break 'sizes;
                        }
                    }
                }
                if !advance(&mut idx, &lens) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Generate contradictions by swapping gradable words for their antonyms.
///
/// When the swapped word is a column-bound superlative anchored at the
/// base row, the flipped rank constraint runs through the guard; unbound
/// swaps carry no constraints and are left for human review.
pub fn antonym_contradictions(
    ctx: &PerturbContext,
    base: &Hypothesis,
    aset: &AlignmentSet,
    supers: &[SuperlativeSpan],
    lexicon: &AntonymLexicon,
    limit: usize,
) -> Vec<NliInstance> {
    let table = ctx.table;
    let anchor = aset.grouped_row(table);
    let mut out = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    seen.insert(base.text.clone());
    for (i, tok) in base.tokens.iter().enumerate() {
        if out.len() >= limit {
            break;
        }
        let Some(antonym) = lexicon.antonym_of(&tok.text) else {
            continue;
        };
        let text = base.render_with(&[((i, i + 1), antonym.to_string())]);
        if !seen.insert(text.clone()) {
            continue;
        }
        let mut constraints = None;
        let bound = supers.iter().find(|sp| sp.span.0 <= i && i < sp.span.1);
        if let (Some(sp), Some(x)) = (bound, anchor) {
            if let Some(rank) = dense_rank(table, sp.column, sp.direction, x) {
                let mut c = alignment_constraints(table, aset);
                c.ranks.push(RankConstraint {
                    col: sp.column,
                    direction: sp.direction.flip(),
                    rank,
                });
                if constraints_hold(table, &c) {
                    // The flipped claim is accidentally true; drop it.
                    continue;
                }
                constraints = Some(c);
            }
        }
        out.push(make_instance(
            ctx,
            OpKind::Antonym,
            text,
            Label::Contradict,
            Vec::new(),
            constraints,
        ));
    }
    out
}

/// Ascending lexicographic k-combinations of `0..n`.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Find the rightmost member that can still move right.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Advance a mixed-radix odometer (last digit fastest). False when wrapped.
fn advance(idx: &mut [usize], lens: &[usize]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < lens[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::{align_all, detect_superlatives, normalize_tokens};
    use crate::lexicon::AbbrevMap;
    use crate::table::RawTable;

    fn election() -> Table {
        Table::parse(&RawTable {
            id: "election".into(),
            headers: vec!["Party".into(), "Votes(thou)".into(), "Seats".into()],
            rows: vec![
                vec!["Party A".into(), "650".into(), "120".into()],
                vec!["Party B".into(), "570".into(), "89".into()],
                vec!["Party C".into(), "final count TBA".into(), "89".into()],
                vec!["Total".into(), "1235".into(), "298".into()],
            ],
        })
        .unwrap()
    }

    fn ctx<'a>(table: &'a Table) -> PerturbContext<'a> {
        PerturbContext {
            table,
            variant: Variant::Og,
            base_id: "base".into(),
            source_task: SourceTask::T2tg,
        }
    }

    fn setup<'a>(
        table: &'a Table,
        text: &str,
        relevant: &[(usize, usize)],
    ) -> (Hypothesis, AlignmentSet, Vec<SuperlativeSpan>) {
        let hyp = normalize_tokens(text).unwrap();
        let coords: Vec<Coord> = relevant.iter().map(|&(r, c)| Coord::new(r, c)).collect();
        let abbrev = AbbrevMap::bundled();
        let aset = align_all(table, &coords, &hyp, &abbrev).unwrap();
        let supers = detect_superlatives(&hyp, table);
        (hyp, aset, supers)
    }

    fn texts(instances: &[NliInstance]) -> Vec<&str> {
        instances.iter().map(|i| i.hypothesis.as_str()).collect()
    }

    #[test]
    fn guard_examples() {
        let t = election();
        let pair = |c: usize, v: &str| (c, v.to_string());
        assert_eq!(
            guard_accidental_entailment(&t, &[pair(0, "Party C"), pair(2, "89")]),
            GuardDecision::Reject
        );
        assert_eq!(
            guard_accidental_entailment(&t, &[pair(0, "Party B"), pair(2, "120")]),
            GuardDecision::Accept
        );
        assert_eq!(guard_accidental_entailment(&t, &[]), GuardDecision::Reject);
    }

    #[test]
    fn rank_rewrite_phrases() {
        assert_eq!(rank_rewrite(1, "most").as_deref(), Some("most"));
        assert_eq!(rank_rewrite(2, "most").as_deref(), Some("second most"));
        assert_eq!(rank_rewrite(3, "least").as_deref(), Some("third least"));
        assert_eq!(rank_rewrite(4, "most"), None);
    }

    #[test]
    fn election_entailments_swap_whole_rows() {
        let t = election();
        let (hyp, aset, supers) = setup(
            &t,
            "Party A won 120 out of 298 seats.",
            &[(0, 0), (0, 2), (3, 2)],
        );
        assert!(aset.complete);
        let ents = generate_entailments(&ctx(&t), &hyp, &aset, &supers, usize::MAX).unwrap();
        assert_eq!(
            texts(&ents),
            vec![
                "Party B won 89 out of 298 seats.",
                "Party C won 89 out of 298 seats.",
            ]
        );
        // The aggregate-grounded 298 stays; constraints still pin it.
        let c = ents[0].lineage.constraints.as_ref().unwrap();
        assert_eq!(c.agg_values.len(), 1);
        assert_eq!(c.agg_values[0].value, "298");
        assert_eq!(c.values.len(), 2);
        assert!(constraints_hold(&t, c));
        assert_eq!(ents[0].lineage.op, OpKind::SubstituteAll);
        assert_eq!(ents[0].lineage.substitutions.len(), 2);
    }

    #[test]
    fn election_contradictions_are_guarded_and_ordered() {
        let t = election();
        let (hyp, aset, supers) = setup(
            &t,
            "Party A won 120 out of 298 seats.",
            &[(0, 0), (0, 2), (3, 2)],
        );
        let cons = generate_contradictions(&ctx(&t), &hyp, &aset, &supers, 5).unwrap();
        assert_eq!(
            texts(&cons),
            vec![
                "Party B won 120 out of 298 seats.",
                "Party C won 120 out of 298 seats.",
                "Party A won 89 out of 298 seats.",
                "Party A won 120 out of 120 seats.",
                "Party A won 120 out of 89 seats.",
            ]
        );
        for inst in &cons {
            let c = inst.lineage.constraints.as_ref().unwrap();
            assert!(!constraints_hold(&t, c), "guard leak: {}", inst.hypothesis);
            assert_eq!(inst.label, Label::Contradict);
            assert_eq!(inst.lineage.op, OpKind::SubstituteSome);
        }
        // The aggregate substitution drew from data rows of the same column.
        let agg_sub = &cons[3].lineage.substitutions[0];
        assert_eq!(agg_sub.cell, Coord::new(3, 2));
        assert_eq!(agg_sub.replacement, Coord::new(0, 2));
    }

    #[test]
    fn superlative_base_rewrites_ranks_and_guards_value_swaps() {
        let t = election();
        let (hyp, aset, supers) = setup(&t, "Party A won the most seats.", &[(0, 0)]);
        assert_eq!(supers.len(), 1);
        let c = ctx(&t);
        let ents = generate_entailments(&c, &hyp, &aset, &supers, usize::MAX).unwrap();
        assert_eq!(
            texts(&ents),
            vec![
                "Party B won the second most seats.",
                "Party C won the second most seats.",
            ]
        );
        assert!(ents.iter().all(|i| i.lineage.op == OpKind::RankRewrite));
        let rc = &ents[0].lineage.constraints.as_ref().unwrap().ranks[0];
        assert_eq!((rc.col, rc.rank), (2, 2));

        // "Party B won the most seats." is false (Party B ranks second), so
        // the value tuple alone must not reject it.
        let cons = generate_contradictions(&c, &hyp, &aset, &supers, 5).unwrap();
        assert_eq!(
            texts(&cons),
            vec![
                "Party B won the most seats.",
                "Party C won the most seats.",
            ]
        );
    }

    #[test]
    fn antonym_swaps_flip_direction_and_guard() {
        let t = election();
        let (hyp, aset, supers) = setup(&t, "Party A won the most seats.", &[(0, 0)]);
        let cons = antonym_contradictions(&ctx(&t), &hyp, &aset, &supers, &AntonymLexicon::bundled(), 5);
        assert_eq!(texts(&cons), vec!["Party A won the least seats."]);
        let c = cons[0].lineage.constraints.as_ref().unwrap();
        assert_eq!(c.ranks[0].direction, crate::align::Direction::Min);
        assert_eq!(c.ranks[0].rank, 1);
        assert!(!constraints_hold(&t, c));
    }

    #[test]
    fn antonym_guard_drops_accidentally_true_swaps() {
        // Party A is both second-highest and second-lowest: flipping the
        // superlative produces a true statement, which must be dropped.
        let t = Table::parse(&RawTable {
            id: "mid".into(),
            headers: vec!["Party".into(), "Seats".into()],
            rows: vec![
                vec!["Party A".into(), "100".into()],
                vec!["Party B".into(), "120".into()],
                vec!["Party C".into(), "89".into()],
            ],
        })
        .unwrap();
        let (hyp, aset, supers) = setup(&t, "Party A won the most seats.", &[(0, 0)]);
        let cons = antonym_contradictions(&ctx(&t), &hyp, &aset, &supers, &AntonymLexicon::bundled(), 5);
        assert!(cons.is_empty());
    }

    #[test]
    fn rows_without_conforming_cells_are_skipped() {
        let t = election();
        // Votes column: Party C's cell is text in a numeric column.
        let (hyp, aset, supers) = setup(
            &t,
            "Party A received 650 thousand votes.",
            &[(0, 0), (0, 1)],
        );
        assert!(aset.complete);
        let ents = generate_entailments(&ctx(&t), &hyp, &aset, &supers, usize::MAX).unwrap();
        assert_eq!(texts(&ents), vec!["Party B received 570 thousand votes."]);
    }

    #[test]
    fn ranks_deeper_than_third_are_skipped() {
        let t = Table::parse(&RawTable {
            id: "deep".into(),
            headers: vec!["Team".into(), "Points".into()],
            rows: vec![
                vec!["Reds".into(), "90".into()],
                vec!["Blues".into(), "80".into()],
                vec!["Greens".into(), "70".into()],
                vec!["Golds".into(), "60".into()],
                vec!["Silvers".into(), "50".into()],
            ],
        })
        .unwrap();
        let (hyp, aset, supers) = setup(&t, "Reds scored the most points.", &[(0, 0)]);
        let ents = generate_entailments(&ctx(&t), &hyp, &aset, &supers, usize::MAX).unwrap();
        assert_eq!(
            texts(&ents),
            vec![
                "Blues scored the second most points.",
                "Greens scored the third most points.",
            ]
        );
    }

    #[test]
    fn inauguration_entailment_renders_every_match_kind() {
        let raw = RawTable {
            id: "inaug".into(),
            headers: vec!["President #".into(), "44".into(), "16".into()],
            rows: vec![
                vec!["Name".into(), "Barack Obama".into(), "Abraham Lincoln".into()],
                vec![
                    "Inauguration Date".into(),
                    "January 20, 2009".into(),
                    "March 4, 1861".into(),
                ],
                vec![
                    "Location".into(),
                    "West Front, US Capitol".into(),
                    "Washington, D.C.".into(),
                ],
            ],
        };
        let (t, decision) = Table::ingest(&raw, &crate::lexicon::HeaderLexicon::bundled()).unwrap();
        assert_eq!(decision.orientation, crate::table::Orientation::Horizontal);
        assert_eq!(
            t.orientation,
            crate::table::TableOrientation::FlippedFromHorizontal
        );
        let (hyp, aset, supers) = setup(
            &t,
            "Obama's inauguration as the forty fourth president took place at the United States Capitol in 2009.",
            &[(0, 0), (0, 1), (0, 2), (0, 3)],
        );
        assert!(aset.complete);
        let ents = generate_entailments(&ctx(&t), &hyp, &aset, &supers, usize::MAX).unwrap();
        assert_eq!(
            texts(&ents),
            vec![
                "Abraham Lincoln's inauguration as the sixteenth president took place at the Washington, D.C. in 1861."
            ]
        );
        let c = ents[0].lineage.constraints.as_ref().unwrap();
        assert!(constraints_hold(&t, c));
    }

    #[test]
    fn mixed_row_alignments_produce_nothing() {
        let t = election();
        // 650 belongs to row 0, 89 to row 1: no single row grounds both.
        let (hyp, aset, supers) = setup(&t, "Somehow 650 and 89 connect.", &[(0, 1), (1, 2)]);
        assert!(aset.complete);
        let c = ctx(&t);
        assert!(generate_entailments(&c, &hyp, &aset, &supers, usize::MAX)
            .unwrap()
            .is_empty());
        assert!(generate_contradictions(&c, &hyp, &aset, &supers, 5)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn incomplete_alignment_set_is_a_usage_error() {
        let t = election();
        let (hyp, mut aset, supers) = setup(&t, "Party A won 120 seats.", &[(0, 0), (0, 2)]);
        aset.complete = false;
        assert!(matches!(
            generate_entailments(&ctx(&t), &hyp, &aset, &supers, usize::MAX),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn combination_order_is_size_then_lexicographic() {
        assert_eq!(
            combinations(3, 2),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(combinations(2, 2), vec![vec![0, 1]]);
        assert!(combinations(2, 3).is_empty());
    }
}
