//! Acceptance suite: every guarantee the crate makes, checked end to end.
//! Each test covers one guarantee and prints one `PASS <name>` line; the
//! property tests verify the generators against independent brute-force
//! oracles written here, not against the crate's own oracle module.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tabrecast::align::{align_all, detect_superlatives, normalize_tokens, MatchKind};
use tabrecast::counterfactual::{apply_swaps, build_cf_table};
use tabrecast::instance::{Label, Lineage, NliInstance, OpKind, SourceTask, Variant};
use tabrecast::lexicon::Lexicons;
use tabrecast::oracle::TupleConstraints;
use tabrecast::perturb::{
    base_instance, generate_contradictions, generate_entailments, PerturbContext,
};
use tabrecast::pipeline::{self, PipelineConfig};
use tabrecast::plugin::Converter;
use tabrecast::recast::{RecastEngine, SptExample};
use tabrecast::sql::{
    execute, extract_skeleton, instantiate_skeleton, parse_sql, render, AggFn, Answer, CmpOp,
    Condition, Extremum, Query, Rhs,
};
use tabrecast::table::{ColType, Coord, RawTable, Table};

fn election_raw() -> RawTable {
    RawTable {
        id: "election".into(),
        headers: vec!["Party".into(), "Votes(thou)".into(), "Seats".into()],
        rows: vec![
            vec!["Party A".into(), "650".into(), "120".into()],
            vec!["Party B".into(), "570".into(), "89".into()],
            vec!["Party C".into(), "final count TBA".into(), "89".into()],
            vec!["Total".into(), "1235".into(), "298".into()],
        ],
    }
}

fn ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Independent tuple check: raw string / plain-float comparison over the
/// table grid, no shared code with the oracle module.
fn cell_eq(raw: &str, want: &str) -> bool {
    if let (Ok(a), Ok(b)) = (raw.trim().parse::<f64>(), want.trim().parse::<f64>()) {
        return a == b;
    }
    raw.trim().eq_ignore_ascii_case(want.trim())
}

fn tuple_true(table: &Table, c: &TupleConstraints) -> bool {
    assert!(c.ranks.is_empty(), "rank constraints not exercised here");
    let agg_ok = c
        .agg_values
        .iter()
        .all(|p| cell_eq(&table.cells[p.row][p.col].raw, &p.value));
    if !agg_ok {
        return false;
    }
    if c.values.is_empty() {
        return true;
    }
    (0..table.cells.len())
        .filter(|r| !table.aggregate_rows.contains(r))
        .any(|r| c.values.iter().all(|p| cell_eq(&table.cells[r][p.col].raw, &p.value)))
}

const WORDS: [&str; 8] = [
    "rojo", "azul", "verde", "oro", "lila", "cyan", "teal", "puce",
];

fn random_table(rng: &mut ChaCha8Rng, idx: usize) -> Table {
    let n_cols = rng.gen_range(2..=4);
    let n_rows = rng.gen_range(2..=5);
    let mut headers = vec!["Label".to_string()];
    let mut numeric = vec![false];
    for c in 1..n_cols {
        headers.push(format!("Col{c}"));
        numeric.push(rng.gen_bool(0.6));
    }
    let mut rows: Vec<Vec<String>> = Vec::new();
    for _ in 0..n_rows {
        let row = (0..n_cols)
            .map(|c| {
                if numeric[c] {
                    rng.gen_range(10..=99).to_string()
                } else {
                    WORDS[rng.gen_range(0..WORDS.len())].to_string()
                }
            })
            .collect();
        rows.push(row);
    }
    if rng.gen_bool(0.3) {
        let agg = (0..n_cols)
            .map(|c| {
                if numeric[c] {
                    rows.iter()
                        .map(|r| r[c].parse::<i64>().unwrap())
                        .sum::<i64>()
                        .to_string()
                } else if c == 0 {
                    "Total".to_string()
                } else {
                    WORDS[rng.gen_range(0..WORDS.len())].to_string()
                }
            })
            .collect();
        rows.push(agg);
    }
    Table::parse(&RawTable {
        id: format!("rand{idx}"),
        headers,
        rows,
    })
    .unwrap()
}

/// A random base hypothesis mentioning 1-3 cells of one data row, plus
/// occasionally one aggregate-row cell.
fn random_base(rng: &mut ChaCha8Rng, table: &Table) -> Option<(String, Vec<Coord>)> {
    let data: Vec<usize> = (0..table.cells.len())
        .filter(|r| !table.aggregate_rows.contains(r))
        .collect();
    let row = *data.choose(rng)?;
    let mut cols: Vec<usize> = (0..table.n_cols()).collect();
    cols.shuffle(rng);
    cols.truncate(rng.gen_range(1..=3.min(table.n_cols())));
    let mut coords: Vec<Coord> = cols.iter().map(|&c| Coord::new(row, c)).collect();
    if rng.gen_bool(0.3) {
        if let Some(&agg_row) = table.aggregate_rows.first() {
            if let Some(c) = (0..table.n_cols())
                .find(|&c| table.col_types[c] == ColType::Number)
            {
                coords.push(Coord::new(agg_row, c));
            }
        }
    }
    let mentions: Vec<String> = coords
        .iter()
        .map(|&c| table.cells[c.row][c.col].raw.clone())
        .collect();
    Some((format!("Entry shows {}.", mentions.join(" with ")), coords))
}

#[test]
fn election_fixture_end_to_end() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.jsonl");
    let output = dir.path().join("out.jsonl");
    let table = serde_json::to_string(&election_raw()).unwrap();
    fs::write(
        &input,
        format!(
            "{}\n{}\n",
            format_args!(
                r#"{{"table":{table},"reference":"Party A won 120 out of 298 seats.","highlighted":[[1,0],[1,2],[4,2]]}}"#
            ),
            format_args!(
                r#"{{"table":{table},"reference":"Party A won the most seats.","highlighted":[[1,0]]}}"#
            ),
        ),
    )
    .unwrap();

    let mut config = PipelineConfig::new(SourceTask::T2tg, input, output.clone());
    config.seed = 7;
    pipeline::run(&config).unwrap();

    let instances: Vec<NliInstance> = fs::read_to_string(&output)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let has = |text: &str, label: Label, variant: Variant| {
        instances
            .iter()
            .any(|i| ws(&i.hypothesis) == ws(text) && i.label == label && i.variant == variant)
    };
    assert!(has("Party B won 89 out of 298 seats.", Label::Entail, Variant::Og));
    assert!(has("Party B won 120 out of 298 seats.", Label::Contradict, Variant::Og));
    assert!(has("Party B won the second most seats.", Label::Entail, Variant::Og));
    assert!(has("Party A won the least seats.", Label::Contradict, Variant::Og));
    assert!(has("Party A won 89 out of 298 seats.", Label::Entail, Variant::Cf));
    assert!(has("Party A won 120 out of 298 seats.", Label::Contradict, Variant::Cf));

    let sidecar = fs::read_to_string(pipeline::tables_sidecar_path(&output)).unwrap();
    let cf: serde_json::Value = sidecar
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .find(|v: &serde_json::Value| v["variant"] == "CF")
        .unwrap();
    let expect_rows = serde_json::json!([
        ["Party B", "650", "120"],
        ["Party A", "570", "89"],
        ["Party C", "final count TBA", "89"],
        ["Total", "1235", "298"],
    ]);
    assert_eq!(cf["rows"], expect_rows);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "PASS election_fixture_end_to_end: all hypotheses present, swapped table emitted ({elapsed:?})"
    );
}

#[test]
fn wikisql_perturbation_exact_set() {
    let engine = RecastEngine::default();
    let mut conv = Converter::template_only();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let out = engine
        .recast_spt(
            &SptExample {
                table: election_raw(),
                question: "Which party won 120 seats?".into(),
                sql: "SELECT Party FROM election WHERE Seats = 120".into(),
                dialect: Some("wikisql".into()),
            },
            &mut conv,
            &mut rng,
        )
        .unwrap();

    let perturbed: Vec<&NliInstance> = out
        .instances
        .iter()
        .filter(|i| i.lineage.query.as_deref().is_some_and(|q| q.contains("'89'")))
        .collect();
    let mut entails: Vec<&str> = perturbed
        .iter()
        .filter(|i| i.label == Label::Entail)
        .map(|i| i.hypothesis.as_str())
        .collect();
    entails.sort();
    assert_eq!(entails, vec!["Party B won 89 seats.", "Party C won 89 seats."]);
    let contras: Vec<&str> = perturbed
        .iter()
        .filter(|i| i.label == Label::Contradict)
        .map(|i| i.hypothesis.as_str())
        .collect();
    assert!(contras.iter().all(|h| !h.contains("Party B") && !h.contains("Party C")));
    assert_eq!(contras, vec!["Party A won 89 seats."]);
    println!("PASS wikisql_perturbation_exact_set: entailments exact, filler contradiction only");
}

#[test]
fn squall_skeleton_template() {
    let countries = Table::parse(&RawTable {
        id: "countries".into(),
        headers: vec!["Country".into(), "Population".into()],
        rows: vec![
            vec!["France".into(), "67".into()],
            vec!["Germany".into(), "83".into()],
        ],
    })
    .unwrap();
    let query = parse_sql(
        &countries,
        "select Country from t where Population = max(Population)",
    )
    .unwrap();
    let skeleton =
        extract_skeleton(&countries, &query, "Which country has the maximum population?").unwrap();
    assert_eq!(skeleton.question_template, "Which C1_text has the maximum C2_num?");
    assert_eq!(
        skeleton.query_template,
        "select c1_text from t where c2_num = max(c2_num)"
    );
    let (_, question) = instantiate_skeleton(&skeleton, &countries).unwrap();
    assert_eq!(question, "Which country has the maximum population?");
    println!("PASS squall_skeleton_template: typed templates and instantiation match");
}

#[test]
fn guard_soundness_random_corpus() {
    let started = Instant::now();
    let lex = Lexicons::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut n_entail, mut n_contra, mut n_tables) = (0usize, 0usize, 0usize);
    for idx in 0..10_000 {
        let table = random_table(&mut rng, idx);
        let Some((text, coords)) = random_base(&mut rng, &table) else {
            continue;
        };
        let hyp = normalize_tokens(&text).unwrap();
        let aset = align_all(&table, &coords, &hyp, &lex.abbreviations).unwrap();
        let supers = detect_superlatives(&hyp, &table);
        let ctx = PerturbContext {
            table: &table,
            variant: Variant::Og,
            base_id: "@0".into(),
            source_task: SourceTask::T2tg,
        };
        n_tables += 1;

        let base = base_instance(&ctx, &hyp, &aset, &supers);
        if let Some(c) = &base.lineage.constraints {
            assert!(tuple_true(&table, c), "base must hold: {text} on {table:?}");
        }
        if aset.complete {
            for e in generate_entailments(&ctx, &hyp, &aset, &supers, 5).unwrap() {
                let c = e.lineage.constraints.as_ref().expect("entailment constraints");
                assert!(
                    tuple_true(&table, c),
                    "entailment must hold: {} on {table:?}",
                    e.hypothesis
                );
                n_entail += 1;
            }
        }
        for con in generate_contradictions(&ctx, &hyp, &aset, &supers, 5).unwrap() {
            let c = con.lineage.constraints.as_ref().expect("contradiction constraints");
            assert!(
                !tuple_true(&table, c),
                "contradiction must not hold: {} on {table:?}",
                con.hypothesis
            );
            n_contra += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(n_tables >= 10_000);
    assert!(n_entail > 1_000, "too few entailments: {n_entail}");
    assert!(n_contra > 10_000, "too few contradictions: {n_contra}");
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "PASS guard_soundness_random_corpus: {n_tables} tables, {n_entail} entailments and {n_contra} contradictions verified ({elapsed:?})"
    );
}

#[test]
fn cf_duality_and_involution() {
    let started = Instant::now();
    let lex = Lexicons::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut n_pairs = 0usize;
    for idx in 0..10_000 {
        let table = random_table(&mut rng, idx);
        let Some((text, coords)) = random_base(&mut rng, &table) else {
            continue;
        };
        let hyp = normalize_tokens(&text).unwrap();
        let aset = align_all(&table, &coords, &hyp, &lex.abbreviations).unwrap();
        let supers = detect_superlatives(&hyp, &table);
        let ctx = PerturbContext {
            table: &table,
            variant: Variant::Og,
            base_id: "@0".into(),
            source_task: SourceTask::T2tg,
        };
        let base = base_instance(&ctx, &hyp, &aset, &supers);
        let cons = generate_contradictions(&ctx, &hyp, &aset, &supers, 5).unwrap();
        let Some(cf) = cons
            .iter()
            .filter(|c| c.lineage.substitutions.len() == 1)
            .find_map(|seed| build_cf_table(&table, seed).ok())
        else {
            continue;
        };

        // Duality: the original base no longer holds on the swapped table,
        // and the seed (the counterfactual base) never held on the original.
        let base_c = base.lineage.constraints.as_ref().unwrap();
        assert!(
            !tuple_true(&cf.table, base_c),
            "og base still holds on cf: {text} {table:?}"
        );
        let seed = cons
            .iter()
            .find(|c| c.lineage.substitutions.len() == 1 && {
                build_cf_table(&table, c)
                    .map(|b| b.swaps == cf.swaps)
                    .unwrap_or(false)
            })
            .unwrap();
        let seed_c = seed.lineage.constraints.as_ref().unwrap();
        assert!(tuple_true(&cf.table, seed_c), "seed must hold on cf");
        assert!(!tuple_true(&table, seed_c), "seed must not hold on og");

        // Involution: applying the same swaps again restores the original.
        let restored = apply_swaps(&cf.table, &cf.swaps).unwrap();
        assert_eq!(restored.to_raw().headers, table.to_raw().headers);
        assert_eq!(restored.to_raw().rows, table.to_raw().rows);
        n_pairs += 1;
    }
    let elapsed = started.elapsed();
    assert!(n_pairs > 1_000, "too few cf pairs: {n_pairs}");
    println!(
        "PASS cf_duality_and_involution: {n_pairs} table pairs, labels flip and swaps invert ({elapsed:?})"
    );
}

fn random_query(rng: &mut ChaCha8Rng, table: &Table) -> Query {
    let n_cols = table.n_cols();
    let data: Vec<usize> = (0..table.cells.len())
        .filter(|r| !table.aggregate_rows.contains(r))
        .collect();
    let numeric_cols: Vec<usize> = (0..n_cols)
        .filter(|&c| table.col_types[c] == ColType::Number)
        .collect();
    let agg = match rng.gen_range(0..10) {
        0..=4 => None,
        5 => Some(AggFn::Count),
        6 => Some(AggFn::Sum),
        7 => Some(AggFn::Avg),
        8 => Some(AggFn::Min),
        _ => Some(AggFn::Max),
    };
    // sum/avg are only defined over numeric columns.
    let select_col = if matches!(agg, Some(AggFn::Sum) | Some(AggFn::Avg)) {
        match numeric_cols.as_slice() {
            [] => 0,
            cols => cols[rng.gen_range(0..cols.len())],
        }
    } else {
        rng.gen_range(0..n_cols)
    };
    let agg = if matches!(agg, Some(AggFn::Sum) | Some(AggFn::Avg)) && numeric_cols.is_empty() {
        None
    } else {
        agg
    };
    let ops = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge];
    let conditions = (0..rng.gen_range(0..=2))
        .map(|_| {
            let col = rng.gen_range(0..n_cols);
            let op = ops[rng.gen_range(0..ops.len())];
            let rhs = if rng.gen_bool(0.25) && !numeric_cols.is_empty() {
                Rhs::Extremum {
                    func: if rng.gen_bool(0.5) { Extremum::Min } else { Extremum::Max },
                    col: numeric_cols[rng.gen_range(0..numeric_cols.len())],
                }
            } else if rng.gen_bool(0.8) {
                let row = data[rng.gen_range(0..data.len())];
                Rhs::Literal(table.cells[row][col].raw.clone())
            } else if table.col_types[col] == ColType::Number {
                Rhs::Literal(rng.gen_range(10..=99).to_string())
            } else {
                Rhs::Literal(WORDS[rng.gen_range(0..WORDS.len())].to_string())
            };
            Condition { col, op, rhs }
        })
        .collect();
    Query {
        table_name: "t".into(),
        select_col,
        agg,
        conditions,
    }
}

/// Brute-force evaluation with plain parsing; `Err` means an empty
/// aggregate result.
fn brute_force(table: &Table, q: &Query) -> Result<Answer, ()> {
    let data: Vec<usize> = (0..table.cells.len())
        .filter(|r| !table.aggregate_rows.contains(r))
        .collect();
    let num = |r: usize, c: usize| table.cells[r][c].raw.trim().parse::<f64>().ok();
    let mut rhs_values = Vec::new();
    for cond in &q.conditions {
        rhs_values.push(match &cond.rhs {
            Rhs::Literal(v) => v.clone(),
            Rhs::Extremum { func, col } => {
                let vals: Vec<f64> = data.iter().filter_map(|&r| num(r, *col)).collect();
                if vals.is_empty() {
                    return Err(());
                }
                let v = vals
                    .iter()
                    .cloned()
                    .reduce(|a, b| if *func == Extremum::Min { a.min(b) } else { a.max(b) })
                    .unwrap();
                if v == v.trunc() {
                    format!("{}", v as i64)
                } else {
                    format!("{v}")
                }
            }
        });
    }
    let holds = |r: usize, cond: &Condition, rhs: &str| -> bool {
        let raw = table.cells[r][cond.col].raw.trim();
        if let (Ok(a), Ok(b)) = (raw.parse::<f64>(), rhs.trim().parse::<f64>()) {
            return match cond.op {
                CmpOp::Eq => a == b,
                CmpOp::Ne => a != b,
                CmpOp::Lt => a < b,
                CmpOp::Le => a <= b,
                CmpOp::Gt => a > b,
                CmpOp::Ge => a >= b,
            };
        }
        let equal = raw.eq_ignore_ascii_case(rhs.trim());
        match cond.op {
            CmpOp::Eq => equal,
            CmpOp::Ne => !equal,
            _ => false,
        }
    };
    let passing: Vec<usize> = data
        .iter()
        .cloned()
        .filter(|&r| {
            q.conditions
                .iter()
                .zip(&rhs_values)
                .all(|(c, v)| holds(r, c, v))
        })
        .collect();
    let col = q.select_col;
    match q.agg {
        None => Ok(Answer::List(
            passing
                .iter()
                .map(|&r| table.cells[r][col].raw.trim().to_string())
                .collect(),
        )),
        Some(AggFn::Count) => Ok(Answer::Number(passing.len() as f64)),
        Some(AggFn::Sum) => Ok(Answer::Number(
            passing.iter().filter_map(|&r| num(r, col)).sum(),
        )),
        Some(AggFn::Avg) => {
            let vals: Vec<f64> = passing.iter().filter_map(|&r| num(r, col)).collect();
            if vals.is_empty() {
                return Err(());
            }
            Ok(Answer::Number(vals.iter().sum::<f64>() / vals.len() as f64))
        }
        Some(agg @ (AggFn::Min | AggFn::Max)) => {
            let want_min = agg == AggFn::Min;
            if table.col_types[col] == ColType::Number {
                let vals: Vec<f64> = passing.iter().filter_map(|&r| num(r, col)).collect();
                vals.iter()
                    .cloned()
                    .reduce(|a, b| if want_min { a.min(b) } else { a.max(b) })
                    .map(Answer::Number)
                    .ok_or(())
            } else {
                let mut keyed: Vec<(String, usize)> = passing
                    .iter()
                    .map(|&r| (table.cells[r][col].raw.trim().to_lowercase(), r))
                    .collect();
                keyed.sort();
                let picked = if want_min { keyed.first() } else { keyed.last() };
                picked
                    .map(|&(_, r)| Answer::Text(table.cells[r][col].raw.trim().to_string()))
                    .ok_or(())
            }
        }
    }
}

fn numbers_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn sql_executor_matches_brute_force() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4096);
    let mut n_pairs = 0usize;
    while n_pairs < 10_000 {
        let table = random_table(&mut rng, n_pairs);
        let query = random_query(&mut rng, &table);

        // The query survives a render/parse round trip unchanged.
        let rendered = render(&table, &query);
        assert_eq!(parse_sql(&table, &rendered).unwrap(), query, "{rendered}");

        let got = execute(&table, &query);
        let want = brute_force(&table, &query);
        match (got, want) {
            (Err(tabrecast::Error::EmptyResult(_)), Err(())) => {}
            (Ok(Answer::List(a)), Ok(Answer::List(b))) => assert_eq!(a, b, "{rendered}"),
            (Ok(Answer::Text(a)), Ok(Answer::Text(b))) => assert_eq!(a, b, "{rendered}"),
            (Ok(Answer::Number(a)), Ok(Answer::Number(b))) => {
                assert!(numbers_close(a, b), "{rendered}: {a} vs {b}")
            }
            (got, want) => panic!("{rendered}: {got:?} vs {want:?}"),
        }
        n_pairs += 1;
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "PASS sql_executor_matches_brute_force: {n_pairs} (table, query) pairs agree ({elapsed:?})"
    );
}

#[test]
fn partial_matching_alignment_kinds() {
    let table = Table::parse(&RawTable {
        id: "inauguration".into(),
        headers: vec![
            "President #".into(),
            "Name".into(),
            "Inauguration Date".into(),
            "Location".into(),
        ],
        rows: vec![vec![
            "44".into(),
            "Barack Obama".into(),
            "January 20, 2009".into(),
            "West Front, US Capitol".into(),
        ]],
    })
    .unwrap();
    let lex = Lexicons::default();
    let hyp = normalize_tokens(
        "Obama's inauguration as the forty fourth president took place at \
         the United States Capitol in 2009.",
    )
    .unwrap();
    let relevant: Vec<Coord> = (0..4).map(|c| Coord::new(0, c)).collect();
    let set = align_all(&table, &relevant, &hyp, &lex.abbreviations).unwrap();
    assert!(set.complete);
    let kind = |col: usize| {
        set.alignments
            .iter()
            .find(|a| a.cell.col == col)
            .map(|a| a.kind)
            .unwrap()
    };
    assert_eq!(kind(0), MatchKind::OrdinalWord);
    assert_eq!(kind(1), MatchKind::Possessive);
    assert_eq!(kind(2), MatchKind::DateComponent);
    assert_eq!(kind(3), MatchKind::PartialToken);
    println!("PASS partial_matching_alignment_kinds: all four cells aligned, complete set");
}

#[test]
fn recast_determinism_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/election_t2tg.jsonl");
    let mut outputs = Vec::new();
    for workers in ["1", "8"] {
        let out = dir.path().join(format!("out{workers}.jsonl"));
        let output_info = Command::new(env!("CARGO_BIN_EXE_tabrecast"))
            .args(["recast", "--task", "t2tg", "--seed", "7", "--workers", workers])
            .arg("--input")
            .arg(&fixture)
            .arg("--output")
            .arg(&out)
            .output()
            .unwrap();
        assert!(output_info.status.success());
        outputs.push((
            fs::read(&out).unwrap(),
            fs::read(pipeline::tables_sidecar_path(&out)).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1], "workers 1 vs 8 must be byte-identical");
    assert!(!outputs[0].0.is_empty());
    println!("PASS recast_determinism_across_workers: workers 1 and 8 byte-identical");
}

#[test]
fn split_exact_partition() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("instances.jsonl");
    let mut lines = Vec::new();
    for t in 0..100 {
        for k in 0..2 {
            let table_id = format!("table{t:03}");
            let mut lineage = Lineage::new(OpKind::Identity, SourceTask::T2tg);
            lineage.base_id = format!("{table_id}:OG:identity:1");
            let inst = NliInstance {
                id: format!("{table_id}:OG:identity:{}", k + 1),
                table_id,
                variant: Variant::Og,
                hypothesis: format!("Row {k} of table {t}."),
                label: Label::Entail,
                lineage,
            };
            lines.push(serde_json::to_string(&inst).unwrap());
        }
    }
    fs::write(&input, lines.join("\n") + "\n").unwrap();

    let train1 = dir.path().join("train1.jsonl");
    let test1 = dir.path().join("test1.jsonl");
    let report = pipeline::split(&input, 0.1, 42, &train1, &test1).unwrap();
    assert_eq!(report.tables, 100);
    assert_eq!(report.test_tables, 10);
    assert_eq!(report.train_instances, 180);
    assert_eq!(report.test_instances, 20);

    let read_ids = |p: &Path| -> Vec<String> {
        fs::read_to_string(p)
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str::<NliInstance>(l).unwrap().table_id)
            .collect()
    };
    let train_ids = read_ids(&train1);
    let test_ids = read_ids(&test1);
    let distinct = |ids: &[String]| {
        let mut v = ids.to_vec();
        v.sort();
        v.dedup();
        v
    };
    assert_eq!(distinct(&test_ids).len(), 10);
    assert!(distinct(&train_ids).iter().all(|t| !test_ids.contains(t)));

    // Exact partition: the two sides hold every input line exactly once.
    let mut merged: Vec<String> = fs::read_to_string(&train1)
        .unwrap()
        .lines()
        .chain(fs::read_to_string(&test1).unwrap().lines())
        .map(str::to_string)
        .collect();
    merged.sort();
    let mut original: Vec<String> = lines.clone();
    original.sort();
    assert_eq!(merged, original);

    // Same seed, same partition, byte for byte.
    let train2 = dir.path().join("train2.jsonl");
    let test2 = dir.path().join("test2.jsonl");
    pipeline::split(&input, 0.1, 42, &train2, &test2).unwrap();
    assert_eq!(fs::read(&train1).unwrap(), fs::read(&train2).unwrap());
    assert_eq!(fs::read(&test1).unwrap(), fs::read(&test2).unwrap());
    println!("PASS split_exact_partition: 10/90 tables, exact partition, reproducible");
}

#[test]
fn validate_self_consistency() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/election_t2tg.jsonl");
    let output = dir.path().join("out.jsonl");
    let mut config = PipelineConfig::new(SourceTask::T2tg, fixture, output.clone());
    config.seed = 7;
    pipeline::run(&config).unwrap();
    let tables = pipeline::tables_sidecar_path(&output);

    let report = pipeline::validate(&output, &tables).unwrap();
    assert_eq!(report.mismatches, 0, "{:?}", report.mismatched_ids);
    assert_eq!(report.errors, 0);
    assert!(report.checked > 20);

    // Flip one verifiable label by hand; validate must flag exactly it.
    let mut instances: Vec<NliInstance> = fs::read_to_string(&output)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let victim = instances
        .iter_mut()
        .find(|i| i.lineage.constraints.is_some())
        .unwrap();
    victim.label = match victim.label {
        Label::Entail => Label::Contradict,
        Label::Contradict => Label::Entail,
    };
    let victim_id = victim.id.clone();
    let flipped = dir.path().join("flipped.jsonl");
    let body: Vec<String> = instances
        .iter()
        .map(|i| serde_json::to_string(i).unwrap())
        .collect();
    fs::write(&flipped, body.join("\n") + "\n").unwrap();

    let report = pipeline::validate(&flipped, &tables).unwrap();
    assert_eq!(report.mismatches, 1);
    assert_eq!(report.mismatched_ids, vec![victim_id]);
    println!("PASS validate_self_consistency: clean corpus verifies, planted flip caught");
}
