//! Align hypothesis spans to cells with the full matcher cascade: exact
//! spans, possessives, partial-token overlap, date components, ordinal
//! number words, and abbreviation expansion.
//!
//! Run with `cargo run --example align_partial_matching`.

use tabrecast::align::{align_all, discover_alignments, normalize_tokens};
use tabrecast::lexicon::AbbrevMap;
use tabrecast::table::{Coord, RawTable, Table};

fn main() -> tabrecast::Result<()> {
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
    })?;
    let abbrev = AbbrevMap::bundled();

    // None of these mentions repeats a cell verbatim: the number is spelled
    // out, the name is possessive, the date is reduced to its year, and the
    // location abbreviates "US" away.
    let hyp = normalize_tokens(
        "Obama's inauguration as the forty fourth president took place at \
         the United States Capitol in 2009.",
    )?;

    let relevant: Vec<Coord> = (0..4).map(|c| Coord::new(0, c)).collect();
    let set = align_all(&table, &relevant, &hyp, &abbrev)?;
    println!("complete alignment: {}", set.complete);
    for a in &set.alignments {
        let cell = table.cell(a.cell)?;
        println!(
            "  cell ({},{}) `{}` <- span `{}` [{:?}, score {:.3}]",
            a.cell.row,
            a.cell.col,
            cell.raw,
            hyp.span_text(a.span),
            a.kind,
            a.score,
        );
    }

    // Without cell annotations, discovery mode tries every cell and keeps
    // the best non-overlapping proposals.
    let hyp2 = normalize_tokens("Barack Obama was inaugurated on January 20, 2009.")?;
    let found = discover_alignments(&table, &hyp2, &abbrev);
    println!("\ndiscovered for `{}`:", hyp2.text);
    for a in &found.alignments {
        println!(
            "  cell ({},{}) <- `{}` [{:?}]",
            a.cell.row,
            a.cell.col,
            hyp2.span_text(a.span),
            a.kind,
        );
    }
    println!(
        "grouped row: {:?}",
        found.grouped_row(&table)
    );
    Ok(())
}
