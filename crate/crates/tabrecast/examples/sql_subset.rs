//! Parse, render, execute, and perturb queries in the supported SQL
//! subset: single-table SELECT with optional aggregate and AND-joined
//! WHERE conditions (including extremum right-hand sides).
//!
//! Run with `cargo run --example sql_subset`.

use tabrecast::sql::{execute, parse_sql, perturb_query, render};
use tabrecast::table::{RawTable, Table};

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

    // Aggregate rows are excluded from execution: the `Total` line never
    // leaks into answers.
    for text in [
        "SELECT Party FROM election WHERE Seats = 120",
        "select Party from t where Seats = 89",
        "select count(Party) from t where Seats = 89",
        "select max(Seats) from t",
        "select avg(Seats) from t where Seats > 100",
        "select Party from t where Seats = max(Seats)",
    ] {
        let query = parse_sql(&table, text)?;
        let answer = execute(&table, &query)?;
        println!("{text}");
        println!("  canonical: {}", render(&table, &query));
        println!("  answer:    {answer:?}");
    }

    // Unsupported constructs fail loudly instead of mis-executing.
    for bad in [
        "select Party, Seats from t",
        "select Party from t where Seats = 120 or Seats = 89",
        "select Party from t join u on 1",
    ] {
        println!("{bad}\n  error:     {}", parse_sql(&table, bad).unwrap_err());
    }

    // Literal perturbation swaps each equality literal for the other
    // values of its column, one change at a time.
    let query = parse_sql(&table, "select Party from t where Seats = 120")?;
    println!("\nperturbations of `{}`:", render(&table, &query));
    for variant in perturb_query(&table, &query) {
        let answer = execute(&table, &variant)?;
        println!("  {} -> {answer:?}", render(&table, &variant));
    }
    Ok(())
}
