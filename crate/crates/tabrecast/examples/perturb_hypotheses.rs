//! Mint entailments and contradictions from one aligned hypothesis, and
//! watch the tuple-match guard reject a contradiction candidate that is
//! accidentally still true.
//!
//! Run with `cargo run --example perturb_hypotheses`.

use tabrecast::align::{align_all, detect_superlatives, normalize_tokens};
use tabrecast::instance::{SourceTask, Variant};
use tabrecast::lexicon::Lexicons;
use tabrecast::perturb::{
    antonym_contradictions, base_instance, generate_contradictions, generate_entailments,
    PerturbContext,
};
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
        base_id: "election:OG:identity:1".into(),
        source_task: SourceTask::T2tg,
    };

    let base = base_instance(&ctx, &hyp, &aset, &supers);
    println!("base entailment:");
    println!("  {}", base.hypothesis);

    // Entailments replace every row-grounded mention with another row's
    // values; the aggregate-grounded `298` stays put.
    println!("\nentailments (substitute_all):");
    for inst in generate_entailments(&ctx, &hyp, &aset, &supers, 5)? {
        println!("  {}", inst.hypothesis);
    }

    // Contradictions replace strict subsets of mentions. Note what is
    // missing below: `Party C won 89 seats`-style candidates pass through
    // the guard only when no single row satisfies the remaining tuple, so
    // substituting 120 -> 89 alone ("Party A won 89...") survives, while a
    // swap that lands on a true row is silently discarded.
    println!("\ncontradictions (substitute_some, guarded):");
    for inst in generate_contradictions(&ctx, &hyp, &aset, &supers, 5)? {
        let subs: Vec<String> = inst
            .lineage
            .substitutions
            .iter()
            .map(|s| {
                format!(
                    "({},{})->({},{})",
                    s.cell.row, s.cell.col, s.replacement.row, s.replacement.col
                )
            })
            .collect();
        println!("  {}  [{}]", inst.hypothesis, subs.join(", "));
    }

    // A superlative hypothesis adds rank rewrites and antonym swaps.
    let hyp2 = normalize_tokens("Party A won the most seats.")?;
    let aset2 = align_all(&table, &[Coord::new(0, 0)], &hyp2, &lex.abbreviations)?;
    let supers2 = detect_superlatives(&hyp2, &table);
    println!("\nsuperlative `{}`:", hyp2.text);
    for inst in generate_entailments(&ctx, &hyp2, &aset2, &supers2, 5)? {
        println!("  entail     {}", inst.hypothesis);
    }
    for inst in generate_contradictions(&ctx, &hyp2, &aset2, &supers2, 5)? {
        println!("  contradict {}", inst.hypothesis);
    }
    for inst in antonym_contradictions(&ctx, &hyp2, &aset2, &supers2, &lex.antonyms, 5) {
        println!("  contradict {}  (antonym)", inst.hypothesis);
    }
    Ok(())
}
