//! Recast one table-to-text line: a reference sentence with highlighted
//! cells becomes a base entailment, row substitutions, guarded
//! contradictions, and a counterfactual-table block.
//!
//! Run with `cargo run --example recast_t2tg`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tabrecast::plugin::Converter;
use tabrecast::recast::{RecastEngine, T2tgExample};
use tabrecast::table::RawTable;

fn main() -> tabrecast::Result<()> {
    let example = T2tgExample {
        table: RawTable {
            id: "election".into(),
            headers: vec!["Party".into(), "Votes(thou)".into(), "Seats".into()],
            rows: vec![
                vec!["Party A".into(), "650".into(), "120".into()],
                vec!["Party B".into(), "570".into(), "89".into()],
                vec!["Party C".into(), "final count TBA".into(), "89".into()],
                vec!["Total".into(), "1235".into(), "298".into()],
            ],
        },
        reference: "Party A won 120 out of 298 seats.".into(),
        // Highlights index the raw grid; row 0 is the header line, so these
        // point at `Party A`, `120`, and the total `298`.
        highlighted: vec![(1, 0), (1, 2), (4, 2)],
    };

    let engine = RecastEngine::default();
    let mut converter = Converter::template_only();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let out = engine.recast_t2tg(&example, &mut converter, &mut rng)?;

    println!("instances ({}):", out.instances.len());
    for inst in &out.instances {
        println!(
            "  [{:?}] {:<10} {:<15} {}",
            inst.variant,
            inst.label.as_str(),
            format!("{:?}", inst.lineage.op),
            inst.hypothesis,
        );
    }

    if let Some(cf) = &out.cf_table {
        println!("\ncounterfactual table (seed {}):", cf.seed_contradiction_id);
        for row in &cf.table.to_raw().rows {
            println!("  {row:?}");
        }
    }
    println!("\nskips: {:?}", out.skips);
    Ok(())
}
