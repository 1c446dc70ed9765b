//! Recast question-answering lines. Short answers are first declarativized
//! (question + answer -> statement); long answers are statements already.
//! Alignments are then discovered from scratch, no cell annotations needed.
//!
//! Run with `cargo run --example recast_qa`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tabrecast::instance::SourceTask;
use tabrecast::plugin::Converter;
use tabrecast::recast::{RecastEngine, TqaExample};
use tabrecast::table::RawTable;

fn election() -> RawTable {
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

fn main() -> tabrecast::Result<()> {
    let engine = RecastEngine::default();
    let mut converter = Converter::template_only();

    // Short answer: `Which party won 120 seats?` + `Party A` becomes the
    // statement `Party A won 120 seats.` before recasting.
    let short = TqaExample {
        table: election(),
        question: "Which party won 120 seats?".into(),
        answer: "Party A".into(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let out = engine.recast_tqa(&short, SourceTask::TqaShort, &mut converter, &mut rng)?;
    println!("short answer -> `{}`", out.instances[0].hypothesis);
    for inst in &out.instances {
        println!(
            "  [{:?}] {:<10} {}",
            inst.variant,
            inst.label.as_str(),
            inst.hypothesis
        );
    }

    // Long answer: already a sentence. This one is grounded in the
    // aggregate `Total` row, so contradictions substitute data-row values
    // into the aggregate mention and no counterfactual table is possible.
    let long = TqaExample {
        table: election(),
        question: "How many seats were there in total?".into(),
        answer: "There were 298 seats in total.".into(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let out = engine.recast_tqa(&long, SourceTask::TqaLong, &mut converter, &mut rng)?;
    println!("\nlong answer (aggregate-grounded):");
    for inst in &out.instances {
        println!(
            "  [{:?}] {:<10} {}",
            inst.variant,
            inst.label.as_str(),
            inst.hypothesis
        );
    }
    println!("cf table built: {}", out.cf_table.is_some());
    println!("skips: {:?}", out.skips);
    Ok(())
}
