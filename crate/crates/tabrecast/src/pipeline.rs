//! Batch driver: parallel per-line recasting behind a deterministic merge,
//! plus the split / stats / validate maintenance entry points.
//!
//! Worker threads pull lines off a shared counter and recast them
//! independently — every line gets its own generator seeded from
//! `(run seed, line number)`, so the merged output is byte-identical for
//! any worker count. The sequential merge then assigns run-global ids,
//! resolves draft references, deduplicates tables, enforces the
//! one-counterfactual-per-table rule, and cross-instantiates query
//! skeletons between lines.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counterfactual::CfTableRecord;
use crate::error::{Error, Result};
use crate::instance::{Label, NliInstance, OpKind, SourceTask, Variant};
use crate::lexicon::{AbbrevMap, AntonymLexicon, Lexicons};
use crate::oracle::constraints_hold;
use crate::plugin::{Converter, PluginChannel, DEFAULT_TIMEOUT};
use crate::recast::{parse_draft_ref, LineOutput, RecastEngine, RecastLimits};
use crate::sql::{instantiate_skeleton, SkeletonLibrary};
use crate::table::{RawTable, Table};

/// Configuration of one `recast` run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub task: SourceTask,
    pub input: PathBuf,
    pub output: PathBuf,
    pub seed: u64,
    pub workers: usize,
    pub limits: RecastLimits,
    /// Override the bundled antonym lexicon.
    pub antonyms: Option<PathBuf>,
    /// Override the bundled abbreviation map.
    pub abbreviations: Option<PathBuf>,
    /// Statement/paraphrase plugin command line.
    pub plugin_cmd: Option<String>,
}

impl PipelineConfig {
    pub fn new(task: SourceTask, input: impl Into<PathBuf>, output: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            task,
            input: input.into(),
            output: output.into(),
            seed: 0,
            workers: 1,
            limits: RecastLimits::default(),
            antonyms: None,
            abbreviations: None,
            plugin_cmd: None,
        }
    }
}

/// Aggregate counters of a run (or of an instance file, for `stats`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub lines_read: usize,
    pub instances: usize,
    pub tables: usize,
    pub cf_tables: usize,
    pub by_label: BTreeMap<String, usize>,
    pub by_variant: BTreeMap<String, usize>,
    pub by_op: BTreeMap<String, usize>,
    pub by_source_task: BTreeMap<String, usize>,
    pub paraphrased: usize,
    pub low_confidence: usize,
    pub skips: BTreeMap<String, usize>,
}

impl RunStats {
    fn count(&mut self, inst: &NliInstance) {
        self.instances += 1;
        *self.by_label.entry(inst.label.as_str().into()).or_insert(0) += 1;
        *self
            .by_variant
            .entry(inst.variant.as_str().into())
            .or_insert(0) += 1;
        *self
            .by_op
            .entry(inst.lineage.op.as_str().into())
            .or_insert(0) += 1;
        *self
            .by_source_task
            .entry(inst.lineage.source_task.as_str().into())
            .or_insert(0) += 1;
        if inst.lineage.paraphrased {
            self.paraphrased += 1;
        }
        if inst.lineage.low_confidence {
            self.low_confidence += 1;
        }
    }
}

/// Original-table record in the tables sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OgTableRecord {
    pub id: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub variant: String,
}

/// Where the tables sidecar of an output file lives.
pub fn tables_sidecar_path(output: &Path) -> PathBuf {
    PathBuf::from(format!("{}.tables.jsonl", output.display()))
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let file = File::open(path)?;
    let mut lines = Vec::new();
    for line in BufReader::new(file).lines() {
        lines.push(line?);
    }
    Ok(lines)
}

fn make_converter(config: &PipelineConfig) -> Result<Converter> {
    match &config.plugin_cmd {
        Some(cmd) => Ok(Converter::with_plugin(PluginChannel::spawn(
            cmd,
            DEFAULT_TIMEOUT,
        )?)),
        None => Ok(Converter::template_only()),
    }
}

fn load_lexicons(config: &PipelineConfig) -> Result<Lexicons> {
    let mut lex = Lexicons::default();
    if let Some(p) = &config.antonyms {
        lex.antonyms = AntonymLexicon::load(p)?;
    }
    if let Some(p) = &config.abbreviations {
        lex.abbreviations = AbbrevMap::load(p)?;
    }
    Ok(lex)
}

/// Generator for one line: identical for every worker layout.
fn line_rng(seed: u64, line_no: usize) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&(line_no as u64).to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

/// Run one recast batch: read every input line, recast them on `workers`
/// threads, merge in input order, and write the instances file plus its
/// tables sidecar. Returns the run counters.
pub fn run(config: &PipelineConfig) -> Result<RunStats> {
    let lexicons = load_lexicons(config)?;
    let engine = RecastEngine::new(lexicons, config.limits.clone());
    let lines = read_lines(&config.input)?;
    let workers = config.workers.max(1).min(lines.len().max(1));

    let slots: Mutex<Vec<Option<LineOutput>>> = Mutex::new(vec![None; lines.len()]);
    let next = AtomicUsize::new(0);
    let failure: Mutex<Option<Error>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut converter = match make_converter(config) {
                    Ok(c) => c,
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        return;
                    }
                };
                loop {
                    if failure.lock().unwrap().is_some() {
                        return;
                    }
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= lines.len() {
                        return;
                    }
                    let mut rng = line_rng(config.seed, i);
                    match engine.recast_line(config.task, &lines[i], &mut converter, &mut rng) {
                        Ok(mut out) => {
                            for diag in converter.take_diagnostics() {
                                eprintln!("line {}: {}", i + 1, diag);
                                out.skips.push("plugin_degraded".into());
                            }
                            slots.lock().unwrap()[i] = Some(out);
                        }
                        Err(e) => {
                            failure.lock().unwrap().get_or_insert(e);
                            return;
                        }
                    }
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let mut results: Vec<LineOutput> = slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("every line was processed"))
        .collect();

    // Cross-line skeleton instantiation: skeletons from every line, applied
    // to every *other* line's table, in line order both ways.
    if config.task == SourceTask::Spt {
        let mut library = SkeletonLibrary::new();
        for out in &results {
            for sk in &out.skeletons {
                library.add(sk.clone(), &out.table_id);
            }
        }
        if !library.entries.is_empty() {
            let mut converter = make_converter(config)?;
            for out in &mut results {
                let Some(table) = out.ingested.clone() else {
                    continue;
                };
                for (skeleton, source_table_id) in &library.entries {
                    if *source_table_id == out.table_id {
                        continue;
                    }
                    let Some((sql_text, question)) = instantiate_skeleton(skeleton, &table) else {
                        continue;
                    };
                    let (instances, skips) = engine.recast_instantiated(
                        &table,
                        &question,
                        &sql_text,
                        &mut converter,
                        out.instances.len(),
                    )?;
                    out.instances.extend(instances);
                    out.skips.extend(skips);
                }
            }
        }
    }

    merge_and_write(config, lines.len(), results)
}

/// Sequential merge: run-global ordinals per `(table, variant, op)`, draft
/// reference resolution, table dedup, and the one-CF-per-table rule.
fn merge_and_write(
    config: &PipelineConfig,
    lines_read: usize,
    results: Vec<LineOutput>,
) -> Result<RunStats> {
    let mut stats = RunStats {
        lines_read,
        ..RunStats::default()
    };
    let mut ordinals: HashMap<(String, Variant, OpKind), usize> = HashMap::new();
    let mut og_tables: Vec<OgTableRecord> = Vec::new();
    let mut og_index: HashMap<String, usize> = HashMap::new();
    let mut cf_records: Vec<CfTableRecord> = Vec::new();
    let mut cf_content: HashMap<String, (Vec<String>, Vec<Vec<String>>)> = HashMap::new();
    let mut out_instances: Vec<NliInstance> = Vec::new();

    for mut out in results {
        for s in out.skips.drain(..) {
            *stats.skips.entry(s).or_insert(0) += 1;
        }
        if out.instances.is_empty() {
            continue;
        }
        if let Some(raw) = &out.og_table {
            match og_index.get(&raw.id) {
                Some(&i) => {
                    if og_tables[i].headers != raw.headers || og_tables[i].rows != raw.rows {
                        *stats.skips.entry("table_id_conflict".into()).or_insert(0) += 1;
                        continue;
                    }
                }
                None => {
                    og_index.insert(raw.id.clone(), og_tables.len());
                    og_tables.push(OgTableRecord {
                        id: raw.id.clone(),
                        headers: raw.headers.clone(),
                        rows: raw.rows.clone(),
                        variant: "OG".into(),
                    });
                }
            }
        }

        // At most one counterfactual table per original table; later lines
        // may reuse it only if their swap produced identical content.
        let mut drop_cf = false;
        let mut emit_cf_record = false;
        if let Some(cf) = &out.cf_table {
            let key = cf.content_key();
            match cf_content.get(&cf.base_table_id) {
                Some(prior) if *prior == key => {}
                Some(_) => {
                    drop_cf = true;
                    *stats.skips.entry("cf_duplicate_table".into()).or_insert(0) += 1;
                }
                None => {
                    cf_content.insert(cf.base_table_id.clone(), key);
                    emit_cf_record = true;
                }
            }
        }

        let keep: Vec<bool> = out
            .instances
            .iter()
            .map(|inst| !(drop_cf && inst.variant == Variant::Cf))
            .collect();
        let mut assigned: Vec<Option<String>> = vec![None; out.instances.len()];
        for (idx, inst) in out.instances.iter().enumerate() {
            if !keep[idx] {
                continue;
            }
            // Ids name the original table; the variant segment already says
            // whether the instance grounds in the counterfactual copy.
            let og = og_key(&inst.table_id).to_string();
            let ordinal = ordinals
                .entry((og.clone(), inst.variant, inst.lineage.op))
                .or_insert(0);
            *ordinal += 1;
            assigned[idx] = Some(NliInstance::compose_id(
                &og,
                inst.variant,
                inst.lineage.op,
                *ordinal,
            ));
        }
        let resolve = |reference: &str, assigned: &[Option<String>]| -> Result<String> {
            let Some(idx) = parse_draft_ref(reference) else {
                return Ok(reference.to_string());
            };
            assigned
                .get(idx)
                .and_then(|id| id.clone())
                .ok_or_else(|| Error::Structural(format!("dangling draft reference @{idx}")))
        };
        for (idx, mut inst) in out.instances.into_iter().enumerate() {
            if !keep[idx] {
                continue;
            }
            inst.id = assigned[idx].clone().expect("kept instances get ids");
            inst.lineage.base_id = resolve(&inst.lineage.base_id, &assigned)?;
            stats.count(&inst);
            out_instances.push(inst);
        }
        if emit_cf_record && !drop_cf {
            let cf = out.cf_table.as_ref().expect("emit implies presence");
            let mut record = cf.to_record();
            record.seed_contradiction_id = resolve(&record.seed_contradiction_id, &assigned)?;
            cf_records.push(record);
        }
    }
    stats.tables = og_tables.len();
    stats.cf_tables = cf_records.len();

    let mut writer = BufWriter::new(File::create(&config.output)?);
    for inst in &out_instances {
        serde_json::to_writer(&mut writer, inst)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;

    let sidecar = tables_sidecar_path(&config.output);
    let mut writer = BufWriter::new(File::create(&sidecar)?);
    for record in &og_tables {
        serde_json::to_writer(&mut writer, record)?;
        writer.write_all(b"\n")?;
    }
    for record in &cf_records {
        serde_json::to_writer(&mut writer, record)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;

    Ok(stats)
}

/// Report of a train/test split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub tables: usize,
    pub test_tables: usize,
    pub train_instances: usize,
    pub test_instances: usize,
}

/// Counterfactual table ids stay with their original across splits.
fn og_key(table_id: &str) -> &str {
    table_id.strip_suffix(":CF").unwrap_or(table_id)
}

/// Split an instances file into train and test by table: the distinct
/// original-table ids are shuffled with the given seed and `ceil(ratio · n)`
/// of them become the test side. Every instance lands in exactly one file,
/// in its original order.
pub fn split(
    input: &Path,
    ratio: f64,
    seed: u64,
    train_out: &Path,
    test_out: &Path,
) -> Result<SplitReport> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Usage(format!(
            "split ratio must be strictly between 0 and 1, got {ratio}"
        )));
    }
    let lines = read_lines(input)?;
    let mut instances = Vec::with_capacity(lines.len());
    let mut keys: Vec<String> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for line in &lines {
        let inst: NliInstance = serde_json::from_str(line)?;
        let key = og_key(&inst.table_id).to_string();
        if seen.insert(key.clone()) {
            keys.push(key);
        }
        instances.push(inst);
    }
    let mut shuffled = keys.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    shuffled.shuffle(&mut rng);
    let n_test = ((ratio * keys.len() as f64).ceil() as usize).min(keys.len());
    let test_keys: HashSet<String> = shuffled.into_iter().take(n_test).collect();

    let mut train = BufWriter::new(File::create(train_out)?);
    let mut test = BufWriter::new(File::create(test_out)?);
    let mut report = SplitReport {
        tables: keys.len(),
        test_tables: n_test,
        train_instances: 0,
        test_instances: 0,
    };
    for (inst, line) in instances.iter().zip(&lines) {
        if test_keys.contains(og_key(&inst.table_id)) {
            test.write_all(line.as_bytes())?;
            test.write_all(b"\n")?;
            report.test_instances += 1;
        } else {
            train.write_all(line.as_bytes())?;
            train.write_all(b"\n")?;
            report.train_instances += 1;
        }
    }
    train.flush()?;
    test.flush()?;
    Ok(report)
}

/// Count an existing instances file into the same shape `run` reports.
pub fn stats_from_file(path: &Path) -> Result<RunStats> {
    let lines = read_lines(path)?;
    let mut stats = RunStats {
        lines_read: lines.len(),
        ..RunStats::default()
    };
    let mut tables: HashSet<String> = HashSet::new();
    let mut cf_tables: HashSet<String> = HashSet::new();
    for line in &lines {
        let inst: NliInstance = serde_json::from_str(line)?;
        if inst.table_id.ends_with(":CF") {
            cf_tables.insert(inst.table_id.clone());
        } else {
            tables.insert(inst.table_id.clone());
        }
        stats.count(&inst);
    }
    stats.tables = tables.len();
    stats.cf_tables = cf_tables.len();
    Ok(stats)
}

/// Result of re-checking an instances file against its tables sidecar.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Instances whose tuple constraints were re-evaluated.
    pub checked: usize,
    /// Constraint verdicts disagreeing with the stored label.
    pub mismatches: usize,
    /// Instances without constraints (paraphrases, low-confidence bases,
    /// non-derivable queries).
    pub unverifiable: usize,
    /// Instances referencing a table the sidecar does not carry.
    pub errors: usize,
    pub mismatched_ids: Vec<String>,
}

/// Re-evaluate every instance's tuple constraints against its table: an
/// entailment must hold, a contradiction must not.
pub fn validate(instances_path: &Path, tables_path: &Path) -> Result<ValidationReport> {
    let mut tables: HashMap<String, Table> = HashMap::new();
    for line in read_lines(tables_path)? {
        let raw: RawTable = serde_json::from_str(&line)?;
        let table = Table::parse(&raw)?;
        tables.insert(table.id.clone(), table);
    }
    let mut report = ValidationReport::default();
    for line in read_lines(instances_path)? {
        let inst: NliInstance = serde_json::from_str(&line)?;
        let Some(table) = tables.get(&inst.table_id) else {
            report.errors += 1;
            continue;
        };
        let Some(constraints) = &inst.lineage.constraints else {
            report.unverifiable += 1;
            continue;
        };
        report.checked += 1;
        let holds = constraints_hold(table, constraints);
        let expected = inst.label == Label::Entail;
        if holds != expected {
            report.mismatches += 1;
            report.mismatched_ids.push(inst.id.clone());
        }
    }
    Ok(report)
}
