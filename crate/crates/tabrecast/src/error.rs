//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by table ingestion, alignment, perturbation, SQL
/// evaluation, plugins, and the batch pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Structural table problem: ragged rows, empty header names, or
    /// coordinates that fall outside the grid.
    #[error("structural: {0}")]
    Structural(String),

    /// A substitution source sits in a header or aggregate row where the
    /// requested operation forbids it.
    #[error("cell ({row}, {col}) is non-replaceable ({reason})")]
    NonReplaceable {
        row: usize,
        col: usize,
        reason: String,
    },

    /// A hypothesis was empty after normalization.
    #[error("empty hypothesis")]
    EmptyHypothesis,

    /// The SQL text uses syntax outside the supported subset.
    #[error("unsupported sql construct: {0}")]
    SqlUnsupported(String),

    /// The SQL text does not parse at all.
    #[error("sql parse error: {0}")]
    SqlParse(String),

    /// A column name in a query did not resolve against the table headers.
    #[error("unknown column `{name}`; available: {candidates:?}")]
    SqlResolution {
        name: String,
        candidates: Vec<String>,
    },

    /// min/max/avg aggregate over zero matching rows.
    #[error("aggregate `{0}` over empty row set")]
    EmptyResult(String),

    /// A counterfactual swap was refused (aggregate/header cell, numeric
    /// column with an aggregate row, or a failed duality check).
    #[error("counterfactual swap refused: {0}")]
    CfRefused(String),

    /// The plugin broke the line-delimited JSON protocol (bad handshake,
    /// mismatched response id).
    #[error("plugin protocol: {0}")]
    PluginProtocol(String),

    /// Underlying I/O failure.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON on a wire format the caller asked us to parse strictly.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    /// Bad user-supplied configuration (CLI usage errors map here).
    #[error("usage: {0}")]
    Usage(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
