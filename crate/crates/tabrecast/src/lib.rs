//! Recast tabular datasets into natural-language-inference instances.
//!
//! Tables paired with text — generation references, QA pairs, semantic
//! parses — are turned into `(table, hypothesis, label)` triples by
//! aligning hypothesis spans to cells, substituting aligned values row by
//! row to mint entailments and guarded contradictions, swapping cells to
//! build counterfactual tables, and executing a small SQL subset to state
//! answers as hypotheses.
//!
//! Start from the `examples/` directory; each example is a runnable tour
//! of one capability:
//!
//! * `parse_and_orient` — table ingestion, orientation, aggregate rows
//! * `align_partial_matching` — the matcher cascade over a hypothesis
//! * `perturb_hypotheses` — entailments, contradictions, and the guard
//! * `counterfactual_tables` — cell-swap tables and label duality
//! * `sql_subset` — parse, render, execute, and perturb queries
//! * `query_skeletons` — typed query/question templates
//! * `recast_t2tg`, `recast_qa`, `recast_spt` — per-task recasters
//! * `batch_pipeline` — the deterministic multi-worker batch driver
//!
//! The same functionality ships as a thin `tabrecast` binary with
//! `recast`, `split`, `stats`, and `validate` subcommands.

pub mod align;
pub mod counterfactual;
pub mod error;
pub mod instance;
pub mod lexicon;
pub mod numword;
pub mod oracle;
pub mod perturb;
pub mod pipeline;
pub mod plugin;
pub mod recast;
pub mod sql;
pub mod table;

pub use error::{Error, Result};
pub use instance::{Label, Lineage, NliInstance, OpKind, SourceTask, Variant};
pub use table::{Coord, RawTable, Table};
