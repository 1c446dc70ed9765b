//! Extract a typed query/question skeleton from an annotated question and
//! instantiate it on a different table with compatible column types.
//!
//! Run with `cargo run --example query_skeletons`.

use tabrecast::sql::{execute, extract_skeleton, instantiate_skeleton, parse_sql, SkeletonLibrary};
use tabrecast::table::{RawTable, Table};

fn main() -> tabrecast::Result<()> {
    let countries = Table::parse(&RawTable {
        id: "countries".into(),
        headers: vec!["Country".into(), "Population".into()],
        rows: vec![
            vec!["France".into(), "67".into()],
            vec!["Germany".into(), "83".into()],
        ],
    })?;
    let cities = Table::parse(&RawTable {
        id: "cities".into(),
        headers: vec!["City".into(), "Residents".into()],
        rows: vec![
            vec!["Springfield".into(), "30".into()],
            vec!["Shelbyville".into(), "45".into()],
        ],
    })?;

    // The question's header and literal mentions become typed slots.
    let question = "Which country has the maximum population?";
    let query = parse_sql(
        &countries,
        "select Country from t where Population = max(Population)",
    )?;
    let skeleton = extract_skeleton(&countries, &query, question)?;
    println!("question: {question}");
    println!("  query template:    {}", skeleton.query_template);
    println!("  question template: {}", skeleton.question_template);
    println!("  slots:             {:?}", skeleton.slots);

    // Instantiating on another table re-fills the slots with that table's
    // headers, giving a brand-new annotated question for free.
    let (new_sql, new_question) =
        instantiate_skeleton(&skeleton, &cities).expect("compatible column types");
    println!("\ninstantiated on `cities`:");
    println!("  question: {new_question}");
    println!("  sql:      {new_sql}");
    let answer = execute(&cities, &parse_sql(&cities, &new_sql)?)?;
    println!("  answer:   {answer:?}");

    // The library deduplicates template pairs across lines.
    let mut library = SkeletonLibrary::new();
    library.add(skeleton.clone(), "countries");
    library.add(skeleton, "countries");
    println!("\nlibrary entries after two identical adds: {}", library.len());
    Ok(())
}
