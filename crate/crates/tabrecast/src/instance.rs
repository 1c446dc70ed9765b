//! NLI instance and lineage records.
//!
//! Every generated hypothesis is wrapped in an [`NliInstance`] carrying a
//! stable id, its label, and a [`Lineage`] block that records how it was
//! produced: the operation, cell substitutions, the source task, and —
//! when the hypothesis is mechanically checkable — the tuple constraints
//! that `validate` re-evaluates against the table.

use serde::{Deserialize, Serialize};

use crate::oracle::TupleConstraints;
use crate::table::Coord;

/// Entailment label of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Entail,
    Contradict,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Entail => "entail",
            Label::Contradict => "contradict",
        }
    }
}

/// Whether the instance is grounded in the original table or its
/// counterfactual variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "OG")]
    Og,
    #[serde(rename = "CF")]
    Cf,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Og => "OG",
            Variant::Cf => "CF",
        }
    }
}

/// Source task the instance was recast from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SourceTask {
    #[serde(rename = "T2TG")]
    T2tg,
    #[serde(rename = "TQA_short")]
    TqaShort,
    #[serde(rename = "TQA_long")]
    TqaLong,
    #[serde(rename = "SPT")]
    Spt,
}

impl SourceTask {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceTask::T2tg => "T2TG",
            SourceTask::TqaShort => "TQA_short",
            SourceTask::TqaLong => "TQA_long",
            SourceTask::Spt => "SPT",
        }
    }
}

/// Generation operation recorded in lineage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    /// The base hypothesis itself, unmodified.
    Identity,
    /// Row-consistent replacement of every aligned entity (entailment).
    SubstituteAll,
    /// Replacement of a subset of aligned entities (contradiction).
    SubstituteSome,
    /// Antonym swap of a gradable word (contradiction).
    Antonym,
    /// Superlative rephrased to the substituted row's rank (entailment).
    RankRewrite,
    /// Hypothesis re-derived against a counterfactual table.
    CfRegenerate,
    /// Hypothesis stated from a query's executed answer.
    SqlExecute,
}

impl OpKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OpKind::Identity => "identity",
            OpKind::SubstituteAll => "substitute_all",
            OpKind::SubstituteSome => "substitute_some",
            OpKind::Antonym => "antonym",
            OpKind::RankRewrite => "rank_rewrite",
            OpKind::CfRegenerate => "cf_regenerate",
            OpKind::SqlExecute => "sql_execute",
        }
    }
}

/// One cell substitution applied to a hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Substitution {
    /// Cell the original mention was aligned to.
    pub cell: Coord,
    /// Cell the replacement value was drawn from.
    pub replacement: Coord,
    /// Surface text spliced into the hypothesis.
    pub surface: String,
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Provenance of an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lineage {
    /// Id of the base instance this was derived from (a base points at itself).
    pub base_id: String,
    pub op: OpKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub substitutions: Vec<Substitution>,
    pub source_task: SourceTask,
    /// Tuple constraints for mechanical re-validation, when derivable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<TupleConstraints>,
    /// Set when alignment found no anchor for the base hypothesis.
    #[serde(default, skip_serializing_if = "is_false")]
    pub low_confidence: bool,
    /// Set on instances whose text came back from a paraphrase plugin.
    #[serde(default, skip_serializing_if = "is_false")]
    pub paraphrased: bool,
    /// Original query text, for instances derived from semantic parses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<String>,
    /// Executed answer value a hypothesis states, for query-derived instances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answer_value: Option<String>,
}

impl Lineage {
    pub fn new(op: OpKind, source_task: SourceTask) -> Self {
        Lineage {
            base_id: String::new(),
            op,
            substitutions: Vec::new(),
            source_task,
            constraints: None,
            low_confidence: false,
            paraphrased: false,
            query: None,
            answer_value: None,
        }
    }
}

/// One tabular NLI instance: a table reference, a hypothesis, and a label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NliInstance {
    /// `<table_id>:<variant>:<op>:<ordinal>`, assigned at output time.
    pub id: String,
    pub table_id: String,
    pub variant: Variant,
    pub hypothesis: String,
    pub label: Label,
    pub lineage: Lineage,
}

impl NliInstance {
    /// Compose the instance id from its parts.
    pub fn compose_id(table_id: &str, variant: Variant, op: OpKind, ordinal: usize) -> String {
        format!("{}:{}:{}:{}", table_id, variant.as_str(), op.as_str(), ordinal)
    }
}
