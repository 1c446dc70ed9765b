//! Tuple-match truth oracle.
//!
//! Every substitution-derived hypothesis carries a set of checkable
//! constraints: value pairs grounded in data rows (all must hold in a
//! *single* non-aggregate row), value pairs grounded in aggregate rows
//! (checked verbatim against those cells), and dense-rank constraints
//! contributed by superlative phrases. A hypothesis is true under the
//! oracle iff all three groups hold; contradiction generation rejects
//! candidates that come out true, and `validate` re-derives labels from
//! the same constraints.

use serde::{Deserialize, Serialize};

use crate::align::{dense_rank, Direction};
use crate::table::{cell_matches_value, Table};

/// `(column, value)` pair that must hold in a data row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuePair {
    pub col: usize,
    pub value: String,
}

/// `(row, column, value)` pair grounded in a detected aggregate row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggPair {
    pub row: usize,
    pub col: usize,
    pub value: String,
}

/// Dense-rank constraint from a superlative phrase: the matched data row's
/// value must hold the given rank in the column under the direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankConstraint {
    pub col: usize,
    pub direction: Direction,
    pub rank: usize,
}

/// The full constraint set of one hypothesis.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TupleConstraints {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<ValuePair>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub agg_values: Vec<AggPair>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ranks: Vec<RankConstraint>,
}

impl TupleConstraints {
    pub fn is_empty(&self) -> bool {
        self.values.is_empty() && self.agg_values.is_empty() && self.ranks.is_empty()
    }
}

/// Does a single data row satisfy all value pairs and rank constraints?
pub fn row_satisfies(table: &Table, row: usize, c: &TupleConstraints) -> bool {
    if table.is_aggregate_row(row) {
        return false;
    }
    let values_ok = c.values.iter().all(|vp| {
        table.cells[row]
            .get(vp.col)
            .is_some_and(|cell| cell_matches_value(cell, &vp.value, table.col_types[vp.col]))
    });
    if !values_ok {
        return false;
    }
    c.ranks.iter().all(|rc| {
        dense_rank(table, rc.col, rc.direction, row) == Some(rc.rank)
    })
}

/// Evaluate a constraint set against a table.
///
/// Aggregate pairs must all match their cells; row-level constraints must
/// be satisfied together by at least one data row. An empty set is
/// vacuously true (which is exactly why the guard rejects empty tuples).
pub fn constraints_hold(table: &Table, c: &TupleConstraints) -> bool {
    for ap in &c.agg_values {
        let ok = table
            .cells
            .get(ap.row)
            .and_then(|r| r.get(ap.col))
            .is_some_and(|cell| cell_matches_value(cell, &ap.value, table.col_types[ap.col]));
        if !ok {
            return false;
        }
    }
    if c.values.is_empty() && c.ranks.is_empty() {
        return true;
    }
    (0..table.n_rows()).any(|r| row_satisfies(table, r, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::RawTable;

    fn election() -> Table {
        Table::parse(&RawTable {
            id: "election".into(),
            headers: vec!["Party".into(), "Votes(thou)".into(), "Seats".into()],
            rows: vec![
                vec!["Party A".into(), "650".into(), "120".into()],
                vec!["Party B".into(), "570".into(), "89".into()],
                vec!["Party C".into(), "final count TBA".into(), "89".into()],
                vec!["Total".into(), "1235".into(), "298".into()],
            ],
        })
        .unwrap()
    }

    fn pairs(ps: &[(usize, &str)]) -> TupleConstraints {
        TupleConstraints {
            values: ps
                .iter()
                .map(|(col, v)| ValuePair {
                    col: *col,
                    value: v.to_string(),
                })
                .collect(),
            ..Default::default()
        }
    }

    #[test]
    fn single_row_match_semantics() {
        let t = election();
        // (Party C, 89) sits in one row: true.
        assert!(constraints_hold(&t, &pairs(&[(0, "Party C"), (2, "89")])));
        // (Party B, 120) straddles rows: false.
        assert!(!constraints_hold(&t, &pairs(&[(0, "Party B"), (2, "120")])));
        // Empty tuples are vacuously true.
        assert!(constraints_hold(&t, &TupleConstraints::default()));
    }

    #[test]
    fn aggregate_rows_never_satisfy_row_pairs() {
        let t = election();
        // 1235 only exists in the aggregate row; a row pair cannot use it.
        assert!(!constraints_hold(&t, &pairs(&[(1, "1235")])));
        // But an aggregate pair checks that cell directly.
        let c = TupleConstraints {
            agg_values: vec![AggPair {
                row: 3,
                col: 2,
                value: "298".into(),
            }],
            ..Default::default()
        };
        assert!(constraints_hold(&t, &c));
        let c = TupleConstraints {
            agg_values: vec![AggPair {
                row: 3,
                col: 2,
                value: "89".into(),
            }],
            ..Default::default()
        };
        assert!(!constraints_hold(&t, &c));
    }

    #[test]
    fn rank_constraints_bind_the_matched_row() {
        let t = election();
        let mut c = pairs(&[(0, "Party B")]);
        c.ranks.push(RankConstraint {
            col: 2,
            direction: Direction::Max,
            rank: 1,
        });
        // "Party B … the most seats": Party B's row ranks 2nd, so false.
        assert!(!constraints_hold(&t, &c));
        c.ranks[0].rank = 2;
        assert!(constraints_hold(&t, &c));
        // Min direction: Party A (120) is rank 2 of {89, 120}.
        let mut c = pairs(&[(0, "Party A")]);
        c.ranks.push(RankConstraint {
            col: 2,
            direction: Direction::Min,
            rank: 1,
        });
        assert!(!constraints_hold(&t, &c));
    }

    #[test]
    fn numeric_matching_uses_tolerance_and_commas() {
        let t = election();
        assert!(constraints_hold(&t, &pairs(&[(1, "570")])));
        assert!(constraints_hold(&t, &pairs(&[(1, "570.0000000000")])));
        // Text cells in a numeric column still match by normalized text.
        assert!(constraints_hold(&t, &pairs(&[(1, "Final Count tba")])));
    }
}
