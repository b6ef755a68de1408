//! Flat rows for tabular output of construction reports.

use serde::{Deserialize, Serialize};

use crate::arith::fmt_q;
use crate::pipeline::{KodairaClass, MinimalModelReport};

/// One report as a row of strings and integers. Absent invariants are
/// empty, so the same row encodes to JSON and CSV and decodes back equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub deg: u64,
    pub weights: String,
    pub alpha: i64,
    pub b_weight: String,
    pub vol: String,
    pub pg: String,
    #[serde(rename = "P2")]
    pub p2: String,
    pub chi: i64,
    pub rho: String,
    pub basket: String,
    pub delta: String,
    pub kodaira: String,
}

fn or_empty<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}

impl From<&MinimalModelReport> for ReportRow {
    fn from(r: &MinimalModelReport) -> Self {
        let w = r.source.weights().iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        ReportRow {
            deg: r.source.degree,
            weights: format!("({w})"),
            alpha: r.alpha,
            b_weight: r.centers.iter().map(|c| c.ty.to_string()).collect::<Vec<_>>().join(" "),
            vol: fmt_q(&r.volume),
            pg: or_empty(&r.p_g),
            p2: or_empty(&r.p2),
            chi: r.chi,
            rho: or_empty(&r.rho),
            basket: or_empty(&r.basket),
            delta: r.noether_delta.as_ref().map(fmt_q).unwrap_or_default(),
            kodaira: match r.kodaira_class {
                KodairaClass::GeneralType => "general_type".into(),
                KodairaClass::NumericallyZeroVolume => "numerically_zero_volume".into(),
            },
        }
    }
}

impl ReportRow {
    pub const HEADERS: [&'static str; 12] =
        ["deg", "weights", "alpha", "b_weight", "vol", "pg", "P2", "chi", "rho", "basket", "delta", "kodaira"];

    pub fn cells(&self) -> [String; 12] {
        [
            self.deg.to_string(),
            self.weights.clone(),
            self.alpha.to_string(),
            self.b_weight.clone(),
            self.vol.clone(),
            self.pg.clone(),
            self.p2.clone(),
            self.chi.to_string(),
            self.rho.clone(),
            self.basket.clone(),
            self.delta.clone(),
            self.kodaira.clone(),
        ]
    }
}

/// A Markdown table with one line per row.
pub fn markdown_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = format!("| {} |\n|{}\n", headers.join(" | "), "---|".repeat(headers.len()));
    for r in rows {
        s.push_str(&format!("| {} |\n", r.join(" | ")));
    }
    s
}
