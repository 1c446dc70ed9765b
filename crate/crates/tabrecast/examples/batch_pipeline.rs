//! Drive the batch pipeline end to end: recast a JSONL file with several
//! workers, print run statistics, split the output by table, and re-check
//! every labeled instance against the emitted tables.
//!
//! Run with `cargo run --example batch_pipeline`.

use std::fs;
use std::path::Path;

use tabrecast::pipeline::{self, PipelineConfig};
use tabrecast::instance::SourceTask;

fn main() -> tabrecast::Result<()> {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/election_t2tg.jsonl");
    let dir = std::env::temp_dir().join(format!("tabrecast-example-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let output = dir.join("instances.jsonl");

    let mut config = PipelineConfig::new(SourceTask::T2tg, fixture, output.clone());
    config.seed = 7;
    config.workers = 4;
    let stats = pipeline::run(&config)?;
    println!("run statistics:\n{}", serde_json::to_string_pretty(&stats)?);

    // Every line of the output is one instance; the tables live in a
    // sidecar next to it.
    let sidecar = pipeline::tables_sidecar_path(&output);
    println!("\nfirst instance:");
    let first = fs::read_to_string(&output)?
        .lines()
        .next()
        .unwrap()
        .to_string();
    println!("{first}");
    println!(
        "\nsidecar tables: {}",
        fs::read_to_string(&sidecar)?.lines().count()
    );

    // Split holds out whole tables, never individual instances.
    let report = pipeline::split(
        &output,
        0.34,
        7,
        &dir.join("train.jsonl"),
        &dir.join("test.jsonl"),
    )?;
    println!("\nsplit report:\n{}", serde_json::to_string_pretty(&report)?);

    // Validation replays every constraint-carrying instance.
    let validation = pipeline::validate(&output, &sidecar)?;
    println!(
        "\nvalidation:\n{}",
        serde_json::to_string_pretty(&validation)?
    );

    fs::remove_dir_all(&dir)?;
    Ok(())
}
