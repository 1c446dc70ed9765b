//! Build a counterfactual table from a single-substitution contradiction:
//! swap the two source cells so the contradiction becomes true against the
//! new table, and every label flips cleanly.
//!
//! Run with `cargo run --example counterfactual_tables`.

use tabrecast::align::{align_all, detect_superlatives, normalize_tokens};
use tabrecast::counterfactual::build_cf_table;
use tabrecast::instance::{Label, SourceTask, Variant};
use tabrecast::lexicon::Lexicons;
use tabrecast::oracle::constraints_hold;
use tabrecast::perturb::{base_instance, generate_contradictions, PerturbContext};
use tabrecast::table::{Coord, RawTable, Table};

fn main() -> tabrecast::Result<()> {
    let table = Table::parse(&RawTable {
        id: "election".into(),
        headers: vec!["Party".into(), "Votes(thou)".into(), "Seats".into()],
        rows: vec![
            vec!["Party A".into(), "650".into(), "120".into()],
            vec!["Party B".into(), "570".into(), "89".into()],
            vec!["Party C".into(), "final count TBA".into(), "89".into()],
            vec!["Total".into(), "1235".into(), "298".into()],
        ],
    })?;
    let lex = Lexicons::default();

    let hyp = normalize_tokens("Party A won 120 out of 298 seats.")?;
    let relevant = vec![Coord::new(0, 0), Coord::new(0, 2), Coord::new(3, 2)];
    let aset = align_all(&table, &relevant, &hyp, &lex.abbreviations)?;
    let supers = detect_superlatives(&hyp, &table);
    let ctx = PerturbContext {
        table: &table,
        variant: Variant::Og,
        base_id: "@0".into(),
        source_task: SourceTask::T2tg,
    };
    let base = base_instance(&ctx, &hyp, &aset, &supers);
    let contradictions = generate_contradictions(&ctx, &hyp, &aset, &supers, 5)?;

    // Take the first single-substitution contradiction as the seed.
    let seed = contradictions
        .iter()
        .find(|c| c.lineage.substitutions.len() == 1)
        .expect("single-substitution contradiction");
    println!("seed contradiction: {}", seed.hypothesis);

    let cf = build_cf_table(&table, seed)?;
    println!("swaps: {:?}", cf.swaps);
    println!("counterfactual table:");
    for row in 0..cf.table.n_rows() {
        let cells: Vec<&str> = (0..cf.table.n_cols())
            .map(|col| cf.table.cell(Coord::new(row, col)).map(|c| c.raw.as_str()))
            .collect::<tabrecast::Result<_>>()?;
        println!("  {cells:?}");
    }

    // Label duality: against the counterfactual table the seed's tuple now
    // holds and the original base's tuple no longer does.
    let seed_c = seed.lineage.constraints.as_ref().unwrap();
    let base_c = base.lineage.constraints.as_ref().unwrap();
    println!(
        "\nseed `{}`: was {:?}, tuple now holds: {}",
        seed.hypothesis,
        seed.label,
        constraints_hold(&cf.table, seed_c),
    );
    println!(
        "base `{}`: was {:?}, tuple now holds: {}",
        base.hypothesis,
        Label::Entail,
        constraints_hold(&cf.table, base_c),
    );

    // Swaps refuse unsound seeds: swapping a value into the aggregate
    // `Total` row would silently falsify it, so such seeds are rejected,
    // not repaired.
    let agg_seed = contradictions
        .iter()
        .find(|c| {
            c.lineage.substitutions.len() == 1
                && table.is_aggregate_row(c.lineage.substitutions[0].cell.row)
        })
        .expect("aggregate-mention contradiction");
    println!(
        "\nseed `{}` is refused: {}",
        agg_seed.hypothesis,
        build_cf_table(&table, agg_seed).unwrap_err(),
    );
    Ok(())
}
