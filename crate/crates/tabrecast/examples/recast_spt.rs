//! Recast semantic-parsing lines: execute the annotated SQL, state each
//! answer as a hypothesis, contradict with the absent values, and repeat
//! for literal-perturbed query variants. Squall-style lines also feed the
//! skeleton library.
//!
//! Run with `cargo run --example recast_spt`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tabrecast::plugin::Converter;
use tabrecast::recast::{RecastEngine, SptExample};
use tabrecast::table::RawTable;

fn main() -> tabrecast::Result<()> {
    let engine = RecastEngine::default();
    let mut converter = Converter::template_only();

    let wikisql = SptExample {
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
        question: "Which party won 120 seats?".into(),
        sql: "SELECT Party FROM election WHERE Seats = 120".into(),
        dialect: Some("wikisql".into()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let out = engine.recast_spt(&wikisql, &mut converter, &mut rng)?;
    println!("wikisql line:");
    for inst in &out.instances {
        println!(
            "  {:<10} {}   [{}]",
            inst.label.as_str(),
            inst.hypothesis,
            inst.lineage.query.as_deref().unwrap_or("-"),
        );
    }

    // Squall annotations align SQL to question tokens well enough to
    // extract a reusable skeleton alongside the instances.
    let squall = SptExample {
        table: RawTable {
            id: "countries".into(),
            headers: vec!["Country".into(), "Population".into()],
            rows: vec![
                vec!["France".into(), "67".into()],
                vec!["Germany".into(), "83".into()],
            ],
        },
        question: "Which country has the maximum population?".into(),
        sql: "select Country from t where Population = max(Population)".into(),
        dialect: Some("squall".into()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let out = engine.recast_spt(&squall, &mut converter, &mut rng)?;
    println!("\nsquall line:");
    for inst in &out.instances {
        println!("  {:<10} {}", inst.label.as_str(), inst.hypothesis);
    }
    for (i, skeleton) in out.skeletons.iter().enumerate() {
        println!("  skeleton {i}: {}", skeleton.question_template);
        println!("              {}", skeleton.query_template);
    }
    Ok(())
}
