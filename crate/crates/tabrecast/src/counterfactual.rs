//! Counterfactual tables.
//!
//! A counterfactual (CF) table is built from a single-substitution
//! contradiction by swapping the substitution's source and replacement
//! cells inside their column. Under the swapped table the seed
//! contradiction becomes true — it is promoted to the CF base entailment
//! and a fresh suite is generated against the CF table — while the
//! original base flips to a contradiction. The swap is verified through
//! the tuple oracle before the table is accepted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Label, NliInstance, OpKind};
use crate::oracle::constraints_hold;
use crate::table::{ColType, RawTable, Table};

/// One within-column cell swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfSwap {
    pub col: usize,
    pub row_a: usize,
    pub row_b: usize,
}

/// A counterfactual table together with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct CfTable {
    pub table: Table,
    pub base_table_id: String,
    pub swaps: Vec<CfSwap>,
    pub seed_contradiction_id: String,
}

/// Serialized sidecar form of a counterfactual table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfTableRecord {
    pub id: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub variant: String,
    pub base_table_id: String,
    pub swaps: Vec<CfSwap>,
    pub seed_contradiction_id: String,
}

impl CfTable {
    pub fn to_record(&self) -> CfTableRecord {
        let raw = self.table.to_raw();
        CfTableRecord {
            id: raw.id,
            headers: raw.headers,
            rows: raw.rows,
            variant: "CF".to_string(),
            base_table_id: self.base_table_id.clone(),
            swaps: self.swaps.clone(),
            seed_contradiction_id: self.seed_contradiction_id.clone(),
        }
    }

    /// Table content only — used to decide whether two CF tables built
    /// from different seeds are interchangeable.
    pub fn content_key(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let raw = self.table.to_raw();
        (raw.headers, raw.rows)
    }
}

/// Apply within-column swaps to a table, leaving id, column types,
/// aggregate-row indices, and orientation untouched.
pub fn apply_swaps(table: &Table, swaps: &[CfSwap]) -> Result<Table> {
    let mut out = table.clone();
    for s in swaps {
        let n_rows = out.n_rows();
        let n_cols = out.n_cols();
        if s.row_a >= n_rows || s.row_b >= n_rows || s.col >= n_cols {
            return Err(Error::Structural(format!(
                "swap ({}, {}) <-> ({}, {}) is out of bounds for table '{}'",
                s.row_a, s.col, s.row_b, s.col, table.id
            )));
        }
        if s.row_a != s.row_b {
            let (lo, hi) = (s.row_a.min(s.row_b), s.row_a.max(s.row_b));
            let (top, bottom) = out.cells.split_at_mut(hi);
            std::mem::swap(&mut top[lo][s.col], &mut bottom[0][s.col]);
        }
    }
    Ok(out)
}

/// Build a counterfactual table from a single-substitution contradiction.
///
/// Refused when the seed is not a single-substitution contradiction, when
/// either cell sits in an aggregate row, when the column is numeric and
/// the table carries aggregate rows (the swap would sit under a total),
/// or when the labels would not flip cleanly: the seed must come out true
/// under the swapped table and the original base must stop holding (a base
/// whose tuple also matches an untouched row keeps its old label and is
/// rejected).
pub fn build_cf_table(table: &Table, seed: &NliInstance) -> Result<CfTable> {
    if seed.label != Label::Contradict
        || seed.lineage.op != OpKind::SubstituteSome
        || seed.lineage.substitutions.len() != 1
    {
        return Err(Error::CfRefused(
            "seed must be a single-substitution contradiction".into(),
        ));
    }
    let sub = &seed.lineage.substitutions[0];
    if sub.cell.col != sub.replacement.col {
        return Err(Error::CfRefused(
            "substitution does not stay within one column".into(),
        ));
    }
    let col = sub.cell.col;
    if table.is_aggregate_row(sub.cell.row) || table.is_aggregate_row(sub.replacement.row) {
        return Err(Error::CfRefused(
            "swap cells must not sit in an aggregate row".into(),
        ));
    }
    if table.col_types[col] == ColType::Number && !table.aggregate_rows.is_empty() {
        return Err(Error::CfRefused(
            "numeric-column swap is unsafe while the table has aggregate rows".into(),
        ));
    }
    let constraints = seed.lineage.constraints.as_ref().ok_or_else(|| {
        Error::CfRefused("seed carries no tuple constraints to verify against".into())
    })?;

    let swap = CfSwap {
        col,
        row_a: sub.cell.row,
        row_b: sub.replacement.row,
    };
    let mut cf_table = apply_swaps(table, &[swap])?;
    cf_table.id = format!("{}:CF", table.id);

    if !constraints_hold(&cf_table, constraints) {
        return Err(Error::CfRefused(
            "seed contradiction does not become true under the swapped table".into(),
        ));
    }

    // The other half of the duality: restoring the swapped column's
    // original value in the seed tuple recovers the base's tuple, which
    // must now match no row.
    let mut base_constraints = constraints.clone();
    let mut covered = false;
    for pair in &mut base_constraints.values {
        if pair.col == col {
            pair.value = table.cells[sub.cell.row][col].raw.trim().to_string();
            covered = true;
        }
    }
    if !covered {
        return Err(Error::CfRefused(
            "seed tuple does not constrain the swapped column".into(),
        ));
    }
    if constraints_hold(&cf_table, &base_constraints) {
        return Err(Error::CfRefused(
            "original base still holds under the swapped table".into(),
        ));
    }

    Ok(CfTable {
        table: cf_table,
        base_table_id: table.id.clone(),
        swaps: vec![swap],
        seed_contradiction_id: seed.id.clone(),
    })
}

/// Reconstruct a [`CfTable`] from its sidecar record.
pub fn cf_table_from_record(record: &CfTableRecord) -> Result<CfTable> {
    let raw = RawTable {
        id: record.id.clone(),
        headers: record.headers.clone(),
        rows: record.rows.clone(),
    };
    Ok(CfTable {
        table: Table::parse(&raw)?,
        base_table_id: record.base_table_id.clone(),
        swaps: record.swaps.clone(),
        seed_contradiction_id: record.seed_contradiction_id.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::{align_all, detect_superlatives, normalize_tokens};
    use crate::instance::{SourceTask, Variant};
    use crate::lexicon::AbbrevMap;
    use crate::perturb::{generate_contradictions, PerturbContext};
    use crate::table::Coord;

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

    fn contradictions(table: &Table, text: &str, relevant: &[(usize, usize)]) -> Vec<NliInstance> {
        let hyp = normalize_tokens(text).unwrap();
        let coords: Vec<Coord> = relevant.iter().map(|&(r, c)| Coord::new(r, c)).collect();
        let aset = align_all(table, &coords, &hyp, &AbbrevMap::bundled()).unwrap();
        let supers = detect_superlatives(&hyp, table);
        let ctx = PerturbContext {
            table,
            variant: Variant::Og,
            base_id: "base".into(),
            source_task: SourceTask::T2tg,
        };
        let mut out = generate_contradictions(&ctx, &hyp, &aset, &supers, 5).unwrap();
        for (i, inst) in out.iter_mut().enumerate() {
            inst.id = format!("seed{}", i);
        }
        out
    }

    #[test]
    fn election_cf_swaps_party_names_and_flips_labels() {
        let t = election();
        let cons = contradictions(
            &t,
            "Party A won 120 out of 298 seats.",
            &[(0, 0), (0, 2), (3, 2)],
        );
        let seed = &cons[0];
        assert_eq!(seed.hypothesis, "Party B won 120 out of 298 seats.");
        let cf = build_cf_table(&t, seed).unwrap();
        assert_eq!(cf.table.id, "election:CF");
        assert_eq!(
            cf.swaps,
            vec![CfSwap {
                col: 0,
                row_a: 0,
                row_b: 1
            }]
        );
        let raw = cf.table.to_raw();
        assert_eq!(raw.rows[0][0], "Party B");
        assert_eq!(raw.rows[1][0], "Party A");
        // Aggregate row is untouched, byte for byte.
        assert_eq!(raw.rows[3], vec!["Total", "1235", "298"]);
        // Seed is true under CF; the original base no longer holds.
        let seed_c = seed.lineage.constraints.as_ref().unwrap();
        assert!(constraints_hold(&cf.table, seed_c));
        let base_pairs = crate::oracle::TupleConstraints {
            values: vec![
                crate::oracle::ValuePair {
                    col: 0,
                    value: "Party A".into(),
                },
                crate::oracle::ValuePair {
                    col: 2,
                    value: "120".into(),
                },
            ],
            ..Default::default()
        };
        assert!(constraints_hold(&t, &base_pairs));
        assert!(!constraints_hold(&cf.table, &base_pairs));
    }

    #[test]
    fn numeric_column_swap_is_refused_under_aggregates() {
        let t = election();
        let cons = contradictions(
            &t,
            "Party A won 120 out of 298 seats.",
            &[(0, 0), (0, 2), (3, 2)],
        );
        // Third contradiction substitutes the seats value (numeric column).
        let seed = &cons[2];
        assert_eq!(seed.hypothesis, "Party A won 89 out of 298 seats.");
        let err = build_cf_table(&t, seed).unwrap_err();
        assert!(matches!(err, Error::CfRefused(_)), "got {err:?}");
    }

    #[test]
    fn aggregate_cell_swap_is_refused() {
        let t = election();
        let cons = contradictions(
            &t,
            "Party A won 120 out of 298 seats.",
            &[(0, 0), (0, 2), (3, 2)],
        );
        // Fourth contradiction substitutes the aggregate-grounded mention.
        let seed = &cons[3];
        assert_eq!(seed.hypothesis, "Party A won 120 out of 120 seats.");
        let err = build_cf_table(&t, seed).unwrap_err();
        let Error::CfRefused(reason) = err else {
            panic!("expected refusal");
        };
        assert!(reason.contains("aggregate"));
    }

    #[test]
    fn ambiguous_base_swap_is_refused() {
        // `Party A` holds 120 seats in two districts: the base tuple
        // matches rows 0 and 2, so no single swap can falsify it.
        let t = Table::parse(&RawTable {
            id: "dup".into(),
            headers: vec!["Party".into(), "Votes(thou)".into(), "Seats".into()],
            rows: vec![
                vec!["Party A".into(), "650".into(), "120".into()],
                vec!["Party B".into(), "570".into(), "89".into()],
                vec!["Party A".into(), "420".into(), "120".into()],
            ],
        })
        .unwrap();
        let cons = contradictions(&t, "Party A won 120 seats.", &[(0, 0), (0, 2)]);
        let seed = cons
            .iter()
            .find(|c| c.hypothesis == "Party A won 89 seats.")
            .expect("numeric substitution present");
        let err = build_cf_table(&t, seed).unwrap_err();
        let Error::CfRefused(reason) = err else {
            panic!("expected refusal");
        };
        assert!(reason.contains("original base"), "{reason}");
    }

    #[test]
    fn rank_breaking_swap_fails_duality() {
        let t = Table::parse(&RawTable {
            id: "pair".into(),
            headers: vec!["Party".into(), "Seats".into()],
            rows: vec![
                vec!["Party A".into(), "120".into()],
                vec!["Party B".into(), "89".into()],
            ],
        })
        .unwrap();
        let cons = contradictions(&t, "Party A won the most seats with 120.", &[(0, 0), (0, 1)]);
        let seed = cons
            .iter()
            .find(|c| c.hypothesis == "Party A won the most seats with 89.")
            .expect("numeric substitution present");
        let err = build_cf_table(&t, seed).unwrap_err();
        let Error::CfRefused(reason) = err else {
            panic!("expected refusal");
        };
        assert!(reason.contains("does not become true"));
    }

    #[test]
    fn swaps_are_involutions() {
        let t = election();
        let swap = CfSwap {
            col: 0,
            row_a: 0,
            row_b: 2,
        };
        let once = apply_swaps(&t, &[swap]).unwrap();
        assert_ne!(once.to_raw().rows, t.to_raw().rows);
        let twice = apply_swaps(&once, &[swap]).unwrap();
        assert_eq!(twice.to_raw(), t.to_raw());
    }

    #[test]
    fn record_round_trip() {
        let t = election();
        let cons = contradictions(
            &t,
            "Party A won 120 out of 298 seats.",
            &[(0, 0), (0, 2), (3, 2)],
        );
        let cf = build_cf_table(&t, &cons[0]).unwrap();
        let record = cf.to_record();
        assert_eq!(record.id, "election:CF");
        assert_eq!(record.variant, "CF");
        assert_eq!(record.base_table_id, "election");
        assert_eq!(record.seed_contradiction_id, "seed0");
        let back = cf_table_from_record(&record).unwrap();
        assert_eq!(back.table.to_raw(), cf.table.to_raw());
        assert_eq!(back.swaps, cf.swaps);
    }
}
