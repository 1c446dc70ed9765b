//! Per-task recasters: one source example in, one suite of NLI instances out.
//!
//! Each source line carries a table plus task-specific annotations (a
//! reference sentence with highlighted cells, a question/answer pair, or a
//! question with its SQL parse). The [`RecastEngine`] turns a line into a
//! [`LineOutput`]: the base entailment, row-consistent entailments,
//! guarded contradictions, antonym swaps, an optional counterfactual-table
//! block, and optional paraphrases — together with skip diagnostics for
//! whatever could not be produced soundly.
//!
//! Instances inside a [`LineOutput`] carry *draft references* (`@<index>`)
//! instead of final ids in `lineage.base_id` and
//! `CfTable::seed_contradiction_id`; the batch driver resolves them once
//! run-global ordinals are known.

use std::collections::HashSet;

use rand::Rng;
use serde::Deserialize;

use crate::align::{
    align_all, canonical_number, detect_superlatives, discover_alignments, normalize_tokens,
    AlignmentSet, Hypothesis,
};
use crate::counterfactual::{build_cf_table, CfTable};
use crate::error::{Error, Result};
use crate::instance::{Label, Lineage, NliInstance, OpKind, SourceTask, Variant};
use crate::lexicon::Lexicons;
use crate::oracle::{constraints_hold, TupleConstraints, ValuePair};
use crate::perturb::{
    antonym_contradictions, base_instance, generate_contradictions, generate_entailments,
    PerturbContext,
};
use crate::plugin::{Conversion, Converter};
use crate::sql::{
    execute, extract_skeleton, parse_sql, perturb_query, render, AggFn, Answer, CmpOp, Query,
    QuerySkeleton, Rhs,
};
use crate::table::{normalize_text, Coord, RawTable, Table, TableOrientation};

/// Per-line generation limits and feature switches.
#[derive(Debug, Clone)]
pub struct RecastLimits {
    /// Cap on entailment instances per base statement (and per parse line).
    pub max_entailments: usize,
    /// Cap on contradiction instances per base statement; antonym swaps are
    /// capped by the same number separately.
    pub max_contradictions: usize,
    /// Attempt a counterfactual-table block per line.
    pub enable_cf: bool,
    /// Ask the plugin for one paraphrase per substitution-family instance.
    pub enable_paraphrase: bool,
}

impl Default for RecastLimits {
    fn default() -> Self {
        RecastLimits {
            max_entailments: 5,
            max_contradictions: 5,
            enable_cf: true,
            enable_paraphrase: false,
        }
    }
}

/// One table-to-text source line: a table, a reference sentence, and the
/// grid cells the sentence talks about. Highlight coordinates index the raw
/// grid (row 0 is the grid's first line, i.e. `table.headers`), so
/// row-record tables can highlight values that end up in the first data
/// column after reorientation.
#[derive(Debug, Clone, Deserialize)]
pub struct T2tgExample {
    pub table: RawTable,
    pub reference: String,
    #[serde(default)]
    pub highlighted: Vec<(usize, usize)>,
}

/// One question-answering source line.
#[derive(Debug, Clone, Deserialize)]
pub struct TqaExample {
    pub table: RawTable,
    pub question: String,
    pub answer: String,
}

/// One semantic-parsing source line: a question and its SQL parse.
#[derive(Debug, Clone, Deserialize)]
pub struct SptExample {
    pub table: RawTable,
    pub question: String,
    pub sql: String,
    /// `"wikisql"` or `"squall"`; only squall lines feed the skeleton library.
    #[serde(default)]
    pub dialect: Option<String>,
}

/// Everything one source line produced.
#[derive(Debug, Clone)]
pub struct LineOutput {
    /// Id of the ingested table; empty when the line failed before ingestion.
    pub table_id: String,
    /// Canonical (post-orientation) form of the table, for the sidecar file.
    pub og_table: Option<RawTable>,
    /// The ingested table, kept for cross-line skeleton instantiation.
    pub ingested: Option<Table>,
    /// Instances with draft `@<index>` references in `lineage.base_id`.
    pub instances: Vec<NliInstance>,
    /// Counterfactual table, when one was built for this line.
    pub cf_table: Option<CfTable>,
    /// Query skeletons extracted from this line.
    pub skeletons: Vec<QuerySkeleton>,
    /// Skip-diagnostic slugs, one entry per skipped derivation.
    pub skips: Vec<String>,
}

impl LineOutput {
    fn skipped(reason: &str) -> LineOutput {
        LineOutput {
            table_id: String::new(),
            og_table: None,
            ingested: None,
            instances: Vec::new(),
            cf_table: None,
            skeletons: Vec::new(),
            skips: vec![reason.to_string()],
        }
    }

    /// A line abandoned mid-way: keep the skips gathered so far and add the
    /// terminal reason.
    fn abandoned(mut skips: Vec<String>, reason: &str) -> LineOutput {
        skips.push(reason.to_string());
        let mut out = LineOutput::skipped(reason);
        out.skips = skips;
        out
    }
}

/// Draft reference to the instance at `idx` within the same line.
pub(crate) fn draft_ref(idx: usize) -> String {
    format!("@{idx}")
}

/// Parse a draft reference back to its line-local index.
pub(crate) fn parse_draft_ref(s: &str) -> Option<usize> {
    s.strip_prefix('@')?.parse().ok()
}

/// Map a raw-grid coordinate (row 0 = the grid's first line) to a cell
/// coordinate of the ingested table. `Ok(None)` means the coordinate landed
/// on the oriented table's header line and cannot anchor a substitution.
pub fn map_highlight(table: &Table, row: usize, col: usize) -> Result<Option<Coord>> {
    let mapped = match table.orientation {
        TableOrientation::Vertical => {
            if row == 0 {
                return Ok(None);
            }
            Coord { row: row - 1, col }
        }
        TableOrientation::FlippedFromHorizontal => {
            if col == 0 {
                return Ok(None);
            }
            Coord {
                row: col - 1,
                col: row,
            }
        }
    };
    table.cell(mapped)?;
    Ok(Some(mapped))
}

/// Operations whose instances are offered to the paraphrase plugin.
const PARAPHRASE_OPS: [OpKind; 4] = [
    OpKind::SubstituteAll,
    OpKind::SubstituteSome,
    OpKind::Antonym,
    OpKind::RankRewrite,
];

/// The recasting engine: lexicons plus limits, shared across lines.
#[derive(Debug, Clone)]
pub struct RecastEngine {
    pub lexicons: Lexicons,
    pub limits: RecastLimits,
}

impl Default for RecastEngine {
    fn default() -> Self {
        RecastEngine {
            lexicons: Lexicons::default(),
            limits: RecastLimits::default(),
        }
    }
}

impl RecastEngine {
    pub fn new(lexicons: Lexicons, limits: RecastLimits) -> Self {
        RecastEngine { lexicons, limits }
    }

    /// Recast one JSON source line for the given task. Soft problems
    /// (malformed line, unusable table, inapplicable question) come back as
    /// skip diagnostics; `Err` is reserved for hard faults that must abort
    /// the run, such as a plugin protocol violation.
    pub fn recast_line(
        &self,
        task: SourceTask,
        line: &str,
        converter: &mut Converter,
        rng: &mut impl Rng,
    ) -> Result<LineOutput> {
        match task {
            SourceTask::T2tg => match serde_json::from_str::<T2tgExample>(line) {
                Ok(ex) => self.recast_t2tg(&ex, converter, rng),
                Err(_) => Ok(LineOutput::skipped("malformed_line")),
            },
            SourceTask::TqaShort => match serde_json::from_str::<TqaExample>(line) {
                Ok(ex) => self.recast_tqa(&ex, SourceTask::TqaShort, converter, rng),
                Err(_) => Ok(LineOutput::skipped("malformed_line")),
            },
            SourceTask::TqaLong => match serde_json::from_str::<TqaExample>(line) {
                Ok(ex) => self.recast_tqa(&ex, SourceTask::TqaLong, converter, rng),
                Err(_) => Ok(LineOutput::skipped("malformed_line")),
            },
            SourceTask::Spt => match serde_json::from_str::<SptExample>(line) {
                Ok(ex) => self.recast_spt(&ex, converter, rng),
                Err(_) => Ok(LineOutput::skipped("malformed_line")),
            },
        }
    }

    /// Recast a table-to-text line: the reference sentence is the base
    /// hypothesis and the highlighted cells are the relevant set.
    pub fn recast_t2tg(
        &self,
        ex: &T2tgExample,
        converter: &mut Converter,
        rng: &mut impl Rng,
    ) -> Result<LineOutput> {
        let mut skips = Vec::new();
        let Ok((table, _)) = Table::ingest(&ex.table, &self.lexicons.headers) else {
            return Ok(LineOutput::skipped("table_error"));
        };
        let mut relevant: Vec<Coord> = Vec::new();
        for &(r, c) in &ex.highlighted {
            match map_highlight(&table, r, c) {
                Ok(Some(coord)) => {
                    if !relevant.contains(&coord) {
                        relevant.push(coord);
                    }
                }
                Ok(None) => skips.push("header_highlight".into()),
                Err(_) => skips.push("out_of_bounds_highlight".into()),
            }
        }
        let Ok(hyp) = normalize_tokens(&ex.reference) else {
            return Ok(LineOutput::abandoned(skips, "empty_hypothesis"));
        };
        let aset = align_all(&table, &relevant, &hyp, &self.lexicons.abbreviations)?;
        let mut instances = self.statement_suite(
            &table,
            Variant::Og,
            0,
            SourceTask::T2tg,
            &hyp,
            &aset,
            &mut skips,
        )?;
        let (cf_block, cf_table) = self.cf_block(
            &table,
            &instances,
            SourceTask::T2tg,
            |t, h| align_all(t, &relevant, h, &self.lexicons.abbreviations),
            &mut skips,
        )?;
        instances.extend(cf_block);
        let extras = self.paraphrase_extras(&instances, converter, rng)?;
        instances.extend(extras);
        Ok(LineOutput {
            table_id: table.id.clone(),
            og_table: Some(table.to_raw()),
            ingested: Some(table),
            instances,
            cf_table,
            skeletons: Vec::new(),
            skips,
        })
    }

    /// Recast a question-answering line. Short answers are first turned into
    /// a statement; a long answer is already one. Relevant cells are
    /// discovered by aligning the statement against the whole table.
    pub fn recast_tqa(
        &self,
        ex: &TqaExample,
        task: SourceTask,
        converter: &mut Converter,
        rng: &mut impl Rng,
    ) -> Result<LineOutput> {
        let mut skips = Vec::new();
        let Ok((table, _)) = Table::ingest(&ex.table, &self.lexicons.headers) else {
            return Ok(LineOutput::skipped("table_error"));
        };
        let base_text = if task == SourceTask::TqaLong {
            ex.answer.trim().to_string()
        } else {
            match converter.declarativize(&ex.question, &ex.answer)? {
                Conversion::Statement { text, .. } => text,
                Conversion::Inapplicable(_) => {
                    return Ok(LineOutput::abandoned(skips, "inapplicable_question"));
                }
            }
        };
        let Ok(hyp) = normalize_tokens(&base_text) else {
            return Ok(LineOutput::abandoned(skips, "empty_hypothesis"));
        };
        let aset = discover_alignments(&table, &hyp, &self.lexicons.abbreviations);
        let mut instances =
            self.statement_suite(&table, Variant::Og, 0, task, &hyp, &aset, &mut skips)?;
        let (cf_block, cf_table) = self.cf_block(
            &table,
            &instances,
            task,
            |t, h| Ok(discover_alignments(t, h, &self.lexicons.abbreviations)),
            &mut skips,
        )?;
        instances.extend(cf_block);
        let extras = self.paraphrase_extras(&instances, converter, rng)?;
        instances.extend(extras);
        Ok(LineOutput {
            table_id: table.id.clone(),
            og_table: Some(table.to_raw()),
            ingested: Some(table),
            instances,
            cf_table,
            skeletons: Vec::new(),
            skips,
        })
    }

    /// Recast a semantic-parsing line: execute the query, state its answers,
    /// contradict with absent same-column values, then repeat for
    /// literal-perturbed query variants with the question rewritten to match.
    pub fn recast_spt(
        &self,
        ex: &SptExample,
        converter: &mut Converter,
        _rng: &mut impl Rng,
    ) -> Result<LineOutput> {
        let mut skips = Vec::new();
        let dialect = ex.dialect.as_deref().map(str::to_ascii_lowercase);
        if let Some(d) = dialect.as_deref() {
            if d != "wikisql" && d != "squall" {
                return Ok(LineOutput::skipped("unknown_dialect"));
            }
        }
        let Ok((table, _)) = Table::ingest(&ex.table, &self.lexicons.headers) else {
            return Ok(LineOutput::skipped("table_error"));
        };
        let query = match parse_sql(&table, &ex.sql) {
            Ok(q) => q,
            Err(Error::SqlUnsupported(_)) => {
                return Ok(LineOutput::abandoned(skips, "sql_unsupported"))
            }
            Err(Error::SqlParse(_)) => return Ok(LineOutput::abandoned(skips, "sql_parse_error")),
            Err(Error::SqlResolution { .. }) => {
                return Ok(LineOutput::abandoned(skips, "sql_resolution_error"))
            }
            Err(e) => return Err(e),
        };

        let mut instances = Vec::new();
        let mut ents_left = self.limits.max_entailments;
        let mut cons_left = self.limits.max_contradictions;
        self.statements_for_query(
            &table,
            &query,
            &ex.question,
            converter,
            &mut instances,
            0,
            &mut ents_left,
            &mut cons_left,
            &mut skips,
        )?;
        for variant in perturb_query(&table, &query) {
            match rewrite_question_literals(&ex.question, &query, &variant) {
                Some(question) => {
                    self.statements_for_query(
                        &table,
                        &variant,
                        &question,
                        converter,
                        &mut instances,
                        0,
                        &mut ents_left,
                        &mut cons_left,
                        &mut skips,
                    )?;
                }
                None => skips.push("literal_not_in_question".into()),
            }
        }

        let mut skeletons = Vec::new();
        if dialect.as_deref() == Some("squall") {
            match extract_skeleton(&table, &query, &ex.question) {
                Ok(sk) => skeletons.push(sk),
                Err(_) => skips.push("skeleton_failed".into()),
            }
        }

        Ok(LineOutput {
            table_id: table.id.clone(),
            og_table: Some(table.to_raw()),
            ingested: Some(table),
            instances,
            cf_table: None,
            skeletons,
            skips,
        })
    }

    /// Recast a library-instantiated (question, query) pair against a table.
    /// Statement generation only: instantiated examples are not perturbed
    /// further, feed no counterfactuals, and re-extract no skeletons.
    pub fn recast_instantiated(
        &self,
        table: &Table,
        question: &str,
        sql_text: &str,
        converter: &mut Converter,
        block_start: usize,
    ) -> Result<(Vec<NliInstance>, Vec<String>)> {
        let mut skips = Vec::new();
        let mut instances = Vec::new();
        let Ok(query) = parse_sql(table, sql_text) else {
            skips.push("instantiation_parse_error".into());
            return Ok((instances, skips));
        };
        let mut ents_left = self.limits.max_entailments;
        let mut cons_left = self.limits.max_contradictions;
        self.statements_for_query(
            table,
            &query,
            question,
            converter,
            &mut instances,
            block_start,
            &mut ents_left,
            &mut cons_left,
            &mut skips,
        )?;
        Ok((instances, skips))
    }

    /// Base instance plus the perturbation families around one statement.
    #[allow(clippy::too_many_arguments)]
    fn statement_suite(
        &self,
        table: &Table,
        variant: Variant,
        base_idx: usize,
        task: SourceTask,
        hyp: &Hypothesis,
        aset: &AlignmentSet,
        skips: &mut Vec<String>,
    ) -> Result<Vec<NliInstance>> {
        let ctx = PerturbContext {
            table,
            variant,
            base_id: draft_ref(base_idx),
            source_task: task,
        };
        let supers = detect_superlatives(hyp, table);
        let mut out = vec![base_instance(&ctx, hyp, aset, &supers)];
        if aset.complete {
            let has_row = aset
                .alignments
                .iter()
                .any(|a| !table.is_aggregate_row(a.cell.row));
            if has_row && aset.grouped_row(table).is_none() {
                skips.push("mixed_row_alignment".into());
            }
            out.extend(generate_entailments(
                &ctx,
                hyp,
                aset,
                &supers,
                self.limits.max_entailments,
            )?);
            out.extend(generate_contradictions(
                &ctx,
                hyp,
                aset,
                &supers,
                self.limits.max_contradictions,
            )?);
        } else {
            skips.push("incomplete_alignment".into());
        }
        out.extend(antonym_contradictions(
            &ctx,
            hyp,
            aset,
            &supers,
            &self.lexicons.antonyms,
            self.limits.max_contradictions,
        ));
        Ok(out)
    }

    /// Try to build a counterfactual table from the first eligible seed
    /// contradiction, then regenerate a full suite against it. The seed's
    /// hypothesis — true under the swapped table — becomes the CF base.
    fn cf_block(
        &self,
        table: &Table,
        og: &[NliInstance],
        task: SourceTask,
        realign: impl Fn(&Table, &Hypothesis) -> Result<AlignmentSet>,
        skips: &mut Vec<String>,
    ) -> Result<(Vec<NliInstance>, Option<CfTable>)> {
        if !self.limits.enable_cf {
            return Ok((Vec::new(), None));
        }
        let mut tried = false;
        for (idx, seed) in og.iter().enumerate() {
            if seed.label != Label::Contradict
                || seed.lineage.op != OpKind::SubstituteSome
                || seed.lineage.substitutions.len() != 1
            {
                continue;
            }
            tried = true;
            match build_cf_table(table, seed) {
                Ok(mut cf) => {
                    cf.seed_contradiction_id = draft_ref(idx);
                    let base_idx = og.len();
                    let hyp = normalize_tokens(&seed.hypothesis)?;
                    let aset = realign(&cf.table, &hyp)?;
                    let mut block = self.statement_suite(
                        &cf.table,
                        Variant::Cf,
                        base_idx,
                        task,
                        &hyp,
                        &aset,
                        skips,
                    )?;
                    block[0].lineage.op = OpKind::CfRegenerate;
                    return Ok((block, Some(cf)));
                }
                Err(Error::CfRefused(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        if tried {
            skips.push("cf_refused".into());
        }
        Ok((Vec::new(), None))
    }

    /// One paraphrase per substitution-family instance, chosen with the
    /// line's seeded generator. Paraphrased copies are additions, keep their
    /// source's label and op, and drop constraints (free rewording is no
    /// longer mechanically checkable).
    fn paraphrase_extras(
        &self,
        instances: &[NliInstance],
        converter: &mut Converter,
        rng: &mut impl Rng,
    ) -> Result<Vec<NliInstance>> {
        if !self.limits.enable_paraphrase || !converter.has_plugin() {
            return Ok(Vec::new());
        }
        let mut extras = Vec::new();
        for inst in instances {
            if !PARAPHRASE_OPS.contains(&inst.lineage.op) {
                continue;
            }
            let options = converter.paraphrase(&inst.hypothesis)?;
            if options.is_empty() {
                continue;
            }
            let pick = options[rng.gen_range(0..options.len())].clone();
            if pick == inst.hypothesis {
                continue;
            }
            let mut p = inst.clone();
            p.hypothesis = pick;
            p.lineage.paraphrased = true;
            p.lineage.constraints = None;
            extras.push(p);
        }
        Ok(extras)
    }

    /// Execute one query and emit its statements: entailments for returned
    /// values, contradictions for same-column values the query did not
    /// return. Aggregate answers entail only; a zero count is skipped.
    #[allow(clippy::too_many_arguments)]
    fn statements_for_query(
        &self,
        table: &Table,
        query: &Query,
        question: &str,
        converter: &mut Converter,
        instances: &mut Vec<NliInstance>,
        block_start: usize,
        ents_left: &mut usize,
        cons_left: &mut usize,
        skips: &mut Vec<String>,
    ) -> Result<()> {
        let rendered = render(table, query);
        let answer = match execute(table, query) {
            Ok(a) => a,
            Err(Error::EmptyResult(_)) => {
                skips.push("sql_empty_result".into());
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        match answer {
            Answer::List(values) => {
                let mut answer_values: Vec<String> = Vec::new();
                let mut seen: HashSet<String> = HashSet::new();
                for v in &values {
                    let key = normalize_text(v);
                    if key.is_empty() || !seen.insert(key) {
                        continue;
                    }
                    answer_values.push(v.clone());
                }
                for v in &answer_values {
                    if *ents_left == 0 {
                        break;
                    }
                    if let Some(inst) = self.sql_statement(
                        table,
                        query,
                        &rendered,
                        question,
                        v,
                        Label::Entail,
                        converter,
                        block_start,
                        skips,
                    )? {
                        instances.push(inst);
                        *ents_left -= 1;
                    }
                }
                let answer_keys: HashSet<String> =
                    answer_values.iter().map(|v| normalize_text(v)).collect();
                let mut contra_seen: HashSet<String> = HashSet::new();
                for row in table.data_rows() {
                    if *cons_left == 0 {
                        break;
                    }
                    let raw = table.cells[row][query.select_col].raw.trim().to_string();
                    let key = normalize_text(&raw);
                    if raw.is_empty() || answer_keys.contains(&key) || !contra_seen.insert(key) {
                        continue;
                    }
                    if let Some(inst) = self.sql_statement(
                        table,
                        query,
                        &rendered,
                        question,
                        &raw,
                        Label::Contradict,
                        converter,
                        block_start,
                        skips,
                    )? {
                        instances.push(inst);
                        *cons_left -= 1;
                    }
                }
            }
            Answer::Number(n) => {
                if query.agg == Some(AggFn::Count) && n == 0.0 {
                    skips.push("count_zero".into());
                    return Ok(());
                }
                if *ents_left > 0 {
                    if let Some(inst) = self.sql_statement(
                        table,
                        query,
                        &rendered,
                        question,
                        &canonical_number(n),
                        Label::Entail,
                        converter,
                        block_start,
                        skips,
                    )? {
                        instances.push(inst);
                        *ents_left -= 1;
                    }
                }
            }
            Answer::Text(t) => {
                if *ents_left > 0 {
                    if let Some(inst) = self.sql_statement(
                        table,
                        query,
                        &rendered,
                        question,
                        &t,
                        Label::Entail,
                        converter,
                        block_start,
                        skips,
                    )? {
                        instances.push(inst);
                        *ents_left -= 1;
                    }
                }
            }
        }
        Ok(())
    }

    /// Turn one (question, value) pair into an instance. Tuple constraints
    /// are derived when the query is a plain select with all-equality
    /// literal conditions; a contradiction whose constraints still hold in
    /// some row is dropped as an accidental entailment.
    #[allow(clippy::too_many_arguments)]
    fn sql_statement(
        &self,
        table: &Table,
        query: &Query,
        rendered: &str,
        question: &str,
        value: &str,
        label: Label,
        converter: &mut Converter,
        block_start: usize,
        skips: &mut Vec<String>,
    ) -> Result<Option<NliInstance>> {
        let text = match converter.declarativize(question, value)? {
            Conversion::Statement { text, .. } => text,
            Conversion::Inapplicable(_) => {
                skips.push("inapplicable_question".into());
                return Ok(None);
            }
        };
        let mut constraints = None;
        let derivable = query.agg.is_none()
            && query
                .conditions
                .iter()
                .all(|c| c.op == CmpOp::Eq && matches!(c.rhs, Rhs::Literal(_)));
        if derivable {
            let mut tc = TupleConstraints::default();
            for c in &query.conditions {
                if let Rhs::Literal(v) = &c.rhs {
                    tc.values.push(ValuePair {
                        col: c.col,
                        value: v.clone(),
                    });
                }
            }
            tc.values.push(ValuePair {
                col: query.select_col,
                value: value.to_string(),
            });
            if label == Label::Contradict && constraints_hold(table, &tc) {
                skips.push("accidental_entailment".into());
                return Ok(None);
            }
            constraints = Some(tc);
        }
        let mut lineage = Lineage::new(OpKind::SqlExecute, SourceTask::Spt);
        lineage.base_id = draft_ref(block_start);
        lineage.constraints = constraints;
        lineage.query = Some(rendered.to_string());
        lineage.answer_value = Some(value.to_string());
        Ok(Some(NliInstance {
            id: String::new(),
            table_id: table.id.clone(),
            variant: Variant::Og,
            hypothesis: text,
            label,
            lineage,
        }))
    }
}

/// Rewrite the literals that differ between `original` and `perturbed`
/// inside the question text. Every changed literal must appear verbatim
/// (case-insensitive, on word boundaries) or the rewrite is refused.
pub fn rewrite_question_literals(
    question: &str,
    original: &Query,
    perturbed: &Query,
) -> Option<String> {
    if original.conditions.len() != perturbed.conditions.len() {
        return None;
    }
    let mut out = question.to_string();
    for (a, b) in original.conditions.iter().zip(&perturbed.conditions) {
        let (Rhs::Literal(old), Rhs::Literal(new)) = (&a.rhs, &b.rhs) else {
            continue;
        };
        if old == new {
            continue;
        }
        let span = find_word_span(&out, old)?;
        out.replace_range(span.0..span.1, new);
    }
    Some(out)
}

/// First case-insensitive occurrence of `needle` in `haystack` bounded by
/// non-alphanumeric characters on both sides.
fn find_word_span(haystack: &str, needle: &str) -> Option<(usize, usize)> {
    if needle.is_empty() {
        return None;
    }
    // Compare char-wise: byte offsets survive `to_lowercase` only for
    // ASCII, and the replacement span must index the original string.
    let hay_chars: Vec<(usize, char)> = haystack.char_indices().collect();
    let needle_chars: Vec<char> = needle.to_lowercase().chars().collect();
    let lowered: Vec<char> = hay_chars
        .iter()
        .flat_map(|(_, c)| c.to_lowercase())
        .collect();
    if lowered.len() != hay_chars.len() {
        // Multi-char lowercase expansions; give up rather than missplice.
        return None;
    }
    let n = needle_chars.len();
    for start in 0..hay_chars.len().saturating_sub(n - 1) {
        if lowered[start..start + n] != needle_chars[..] {
            continue;
        }
        let before_ok = start == 0 || !lowered[start - 1].is_alphanumeric();
        let after_ok =
            start + n == hay_chars.len() || !lowered[start + n].is_alphanumeric();
        if before_ok && after_ok {
            let byte_start = hay_chars[start].0;
            let byte_end = if start + n == hay_chars.len() {
                haystack.len()
            } else {
                hay_chars[start + n].0
            };
            return Some((byte_start, byte_end));
        }
    }
    None
}
