//! Reference tables of expected invariants, and row-by-row verification
//! against freshly computed values.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::fmt_q;
use crate::cyclic::Basket;
use crate::error::{Error, Result};
use crate::families::{amplitude_one_model, lift_hypersurface};
use crate::pipeline::{run_construction, ConstructionOutcome};
use crate::wps::WeightedHypersurface;

/// The bundled reference tables.
pub const TABLES_JSON: &str = include_str!("../data/tables.json");

/// One expected row; which fields are present depends on the table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedRow {
    pub no: String,
    pub deg: u64,
    pub weights: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_weight: Option<String>,
    pub vol: String,
    #[serde(default, rename = "P2", skip_serializing_if = "Option::is_none")]
    pub p2: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pg: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basket: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifted_weights: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub can_dim: Option<u64>,
    /// Explicitly `null` in rows without a known bound.
    #[serde(default)]
    pub bound: Option<String>,
}

impl ExpectedRow {
    pub fn hypersurface(&self) -> Result<WeightedHypersurface> {
        WeightedHypersurface::new(self.weights.clone(), self.deg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedTable {
    pub id: String,
    pub title: String,
    /// The columns compared by [`verify_row`].
    pub columns: Vec<String>,
    pub rows: Vec<ExpectedRow>,
}

#[derive(Deserialize)]
struct TableFile {
    version: u32,
    tables: Vec<ExpectedTable>,
}

/// Row counts of the bundled tables, in file order.
pub const ROW_COUNTS: [(&str, usize); 7] = [("A", 31), ("Ap", 15), ("C", 11), ("C+", 3), ("B", 46), ("X", 4), ("D", 11)];

pub fn load_tables(json: &str) -> Result<Vec<ExpectedTable>> {
    let f: TableFile = serde_json::from_str(json).map_err(|e| Error::Data(e.to_string()))?;
    if f.version != 1 {
        return Err(Error::Data(format!("unsupported table file version {}", f.version)));
    }
    Ok(f.tables)
}

pub fn bundled_tables() -> Vec<ExpectedTable> {
    load_tables(TABLES_JSON).expect("bundled table data parses")
}

pub fn find_table<'a>(tables: &'a [ExpectedTable], id: &str) -> Option<&'a ExpectedTable> {
    tables.iter().find(|t| t.id.eq_ignore_ascii_case(id))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDiff {
    pub column: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub table: String,
    pub no: String,
    pub hypersurface: String,
    /// Every computed value, including columns outside the mask.
    pub computed: BTreeMap<String, String>,
    pub diffs: Vec<CellDiff>,
    /// Remarks on unmasked columns; these never fail a row.
    pub notes: Vec<String>,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.diffs.is_empty()
    }
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "unsupported".to_string(), T::to_string)
}

fn three_fold_cells(outcome: &ConstructionOutcome) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    match outcome {
        ConstructionOutcome::Failure { stage, reason } => {
            m.insert("outcome".into(), format!("failed at step {stage}: {reason}"));
        }
        ConstructionOutcome::Success(r) => {
            m.insert("alpha".into(), r.alpha.to_string());
            m.insert("b_weight".into(), r.b_weight());
            m.insert("vol".into(), fmt_q(&r.volume));
            m.insert("P2".into(), opt(&r.p2));
            m.insert("chi".into(), r.chi.to_string());
            m.insert("pg".into(), opt(&r.p_g));
            m.insert("rho".into(), opt(&r.rho));
            m.insert("basket".into(), opt(&r.basket));
            m.insert("delta".into(), r.noether_delta.as_ref().map_or_else(|| "undefined".into(), fmt_q));
        }
    }
    m
}

fn weights_string(w: &[u64]) -> String {
    format!("({})", w.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
}

fn expected_cells(row: &ExpectedRow) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            m.insert(k.to_string(), v);
        }
    };
    put("alpha", row.alpha.map(|x| x.to_string()));
    put("b_weight", row.b_weight.clone());
    put("vol", Some(row.vol.clone()));
    put("P2", row.p2.map(|x| x.to_string()));
    put("chi", row.chi.map(|x| x.to_string()));
    put("pg", row.pg.map(|x| x.to_string()));
    put("rho", row.rho.map(|x| x.to_string()));
    put("basket", row.basket.clone());
    put("delta", row.delta.clone());
    put("dim", row.dim.map(|x| x.to_string()));
    put("can_dim", row.can_dim.map(|x| x.to_string()));
    put("weights", Some(weights_string(row.lifted_weights.as_deref().unwrap_or(&row.weights))));
    put("bound", Some(row.bound.clone().unwrap_or_else(|| "none".into())));
    m
}

fn same(column: &str, expected: &str, actual: &str) -> bool {
    if column == "basket" {
        match (expected.parse::<Basket>(), actual.parse::<Basket>()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    } else {
        expected == actual
    }
}

fn computed_cells(table: &str, row: &ExpectedRow) -> Result<BTreeMap<String, String>> {
    let h = WeightedHypersurface::new(row.weights.clone(), row.deg)?;
    let mut m = BTreeMap::new();
    match table {
        "X" => {
            let lift = lift_hypersurface(&h)?;
            m.insert("dim".into(), lift.hypersurface.dim().to_string());
            m.insert("weights".into(), weights_string(lift.hypersurface.weights()));
            m.insert("vol".into(), lift.volume.as_ref().map_or_else(|| "not guaranteed".into(), fmt_q));
        }
        "D" => {
            // the listed weights are already padded; the base 3-fold is the tail
            let base = WeightedHypersurface::new(row.weights[row.weights.len() - 5..].to_vec(), row.deg)?;
            let model = amplitude_one_model(&base)?;
            m.insert("dim".into(), model.hypersurface.dim().to_string());
            m.insert("weights".into(), weights_string(model.hypersurface.weights()));
            m.insert("vol".into(), fmt_q(&model.volume));
            m.insert("can_dim".into(), model.canonical_dimension.to_string());
            m.insert("bound".into(), model.bound.as_ref().map_or_else(|| "none".into(), fmt_q));
        }
        _ => m = three_fold_cells(&run_construction(&h)),
    }
    Ok(m)
}

/// Compares one row on the table's column mask.
pub fn verify_row(table: &ExpectedTable, row: &ExpectedRow) -> RowCheck {
    let expected = expected_cells(row);
    let (computed, mut notes) = match computed_cells(&table.id, row) {
        Ok(c) => (c, Vec::new()),
        Err(e) => (BTreeMap::new(), vec![e.to_string()]),
    };
    if let Some(o) = computed.get("outcome") {
        notes.push(o.clone());
    }
    let mut diffs = Vec::new();
    for col in &table.columns {
        let exp = expected.get(col).cloned().unwrap_or_default();
        let act = computed.get(col).cloned().unwrap_or_else(|| "missing".into());
        if !same(col, &exp, &act) {
            diffs.push(CellDiff { column: col.clone(), expected: exp, actual: act });
        }
    }
    for (col, exp) in &expected {
        if table.columns.contains(col) {
            continue;
        }
        if let Some(act) = computed.get(col) {
            if !same(col, exp, act) {
                notes.push(format!("{col}: listed {exp}, computed {act}"));
            }
        }
    }
    RowCheck {
        table: table.id.clone(),
        no: row.no.clone(),
        hypersurface: format!("X_{} in P{}", row.deg, weights_string(&row.weights)),
        computed,
        diffs,
        notes,
    }
}

pub fn verify_table(table: &ExpectedTable) -> Vec<RowCheck> {
    use rayon::prelude::*;
    table.rows.par_iter().map(|r| verify_row(table, r)).collect()
}
