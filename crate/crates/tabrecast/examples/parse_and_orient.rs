//! Ingest raw grids: orientation detection, column typing, aggregate rows.
//!
//! Run with `cargo run --example parse_and_orient`.

use tabrecast::lexicon::HeaderLexicon;
use tabrecast::table::{detect_orientation, Coord, RawTable, Table};

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

fn inauguration() -> RawTable {
    RawTable {
        id: "inaug".into(),
        headers: vec!["President #".into(), "44".into()],
        rows: vec![
            vec!["Name".into(), "Barack Obama".into()],
            vec!["Inauguration Date".into(), "January 20, 2009".into()],
            vec!["Location".into(), "West Front, US Capitol".into()],
        ],
    }
}

fn show(raw: &RawTable, lexicon: &HeaderLexicon) -> tabrecast::Result<()> {
    let mut grid = vec![raw.headers.clone()];
    grid.extend(raw.rows.iter().cloned());
    let decision = detect_orientation(&grid, lexicon)?;
    println!("table `{}`", raw.id);
    println!(
        "  orientation {:?} (vertical {:.3}, horizontal {:.3}, lexicon {}/{})",
        decision.orientation,
        decision.vertical_score,
        decision.horizontal_score,
        decision.lexicon_hits,
        decision.lexicon_total,
    );

    let (table, _) = Table::ingest(raw, lexicon)?;
    println!("  headers     {:?}", table.headers);
    println!("  col types   {:?}", table.col_types);
    println!("  aggregates  rows {:?}", table.aggregate_rows);
    for row in 0..table.n_rows() {
        let cells: Vec<&str> = (0..table.n_cols())
            .map(|col| table.cell(Coord::new(row, col)).map(|c| c.raw.as_str()))
            .collect::<tabrecast::Result<_>>()?;
        let marker = if table.is_aggregate_row(row) { "*" } else { " " };
        println!("  row {row}{marker}       {cells:?}");
    }
    println!();
    Ok(())
}

fn main() -> tabrecast::Result<()> {
    let lexicon = HeaderLexicon::bundled();

    // Headers on top: stays as-is, and the all-numeric `Total` line is
    // detected as an aggregate row (sums of the data rows above it).
    show(&election(), &lexicon)?;

    // Headers in the first column: each row is one field of a single
    // record, so ingestion transposes the grid before parsing.
    show(&inauguration(), &lexicon)?;

    Ok(())
}
