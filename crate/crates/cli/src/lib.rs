//! Subcommand implementations behind the `wblow` binary.
//!
//! Every command returns its rendered output together with an exit code, so
//! the binary stays a thin argument parser and the logic is testable.

pub mod output;

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use wblow::arith::fmt_q;
use wblow::bounds::{bound_nm1, bound_nm2};
use wblow::families::{amplitude_one_model, bundled_families, family_instance, lift_hypersurface, load_families};
use wblow::families::{FamilyKind, FamilySpec, LiftClass};
use wblow::pipeline::ConstructionOutcome;
use wblow::report::ReportRow;
use wblow::search::{search, SearchRange};
use wblow::tables::{bundled_tables, find_table, load_tables, verify_table, ExpectedRow, ExpectedTable};
use wblow::wps::WeightedHypersurface;

use output::{render, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Rendered output plus a one-line summary meant for stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub summary: String,
    pub code: i32,
}

/// Reference tables and family listings, bundled or read from a directory.
pub struct Data {
    pub tables: Vec<ExpectedTable>,
    pub families: Vec<FamilySpec>,
}

impl Data {
    /// A directory may provide `tables.json`, `families.json` or both; missing
    /// files fall back to the bundled copies.
    pub fn load(dir: Option<&Path>) -> Result<Data> {
        let Some(dir) = dir else {
            return Ok(Data { tables: bundled_tables(), families: bundled_families() });
        };
        if !dir.is_dir() {
            bail!("data directory {} does not exist", dir.display());
        }
        let (t, f) = (dir.join("tables.json"), dir.join("families.json"));
        if !t.exists() && !f.exists() {
            bail!("{} contains neither tables.json nor families.json", dir.display());
        }
        let tables = if t.exists() {
            load_tables(&std::fs::read_to_string(&t).with_context(|| t.display().to_string())?)?
        } else {
            bundled_tables()
        };
        let families = if f.exists() {
            load_families(&std::fs::read_to_string(&f).with_context(|| f.display().to_string())?)?
        } else {
            bundled_families()
        };
        Ok(Data { tables, families })
    }
}

pub fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|_| anyhow!("expected comma-separated positive integers, got {s:?}")))
        .collect()
}

/// `lo..hi` inclusive, or a single value.
pub fn parse_span(s: &str) -> Result<(u64, u64)> {
    let bad = || anyhow!("expected N or LO..HI, got {s:?}");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        bail!("empty span {s:?}");
    }
    Ok((lo, hi))
}

/// Applies `alpha=LO..HI`, `d=LO..HI` and `weight_max=N` overrides.
pub fn apply_range_keys(mut range: SearchRange, keys: &[String]) -> Result<SearchRange> {
    for kv in keys {
        for part in kv.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(|| anyhow!("expected KEY=VALUE, got {part:?}"))?;
            match k.trim() {
                "alpha" => {
                    let (lo, hi) = parse_span(v)?;
                    (range.alpha_min, range.alpha_max) = (lo as i64, hi as i64);
                }
                "d" => (range.d_min, range.d_max) = parse_span(v)?,
                "weight_max" | "w" => range.weight_max = v.trim().parse().map_err(|_| anyhow!("bad weight_max {v:?}"))?,
                other => bail!("unknown range key {other:?}; expected alpha, d or weight_max"),
            }
        }
    }
    range.validate()?;
    Ok(range)
}

/// `SearchRange` defaults, overridden by a JSON file, then by range keys.
pub fn search_range(config: Option<&Path>, keys: &[String]) -> Result<SearchRange> {
    let base = match config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| p.display().to_string())?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => SearchRange::default(),
    };
    apply_range_keys(base, keys)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub table: String,
    pub no: String,
    pub hypersurface: String,
    pub status: String,
    /// `column: listed X, computed Y` entries joined by `; `.
    pub diffs: String,
    pub notes: String,
}

impl VerifyRow {
    pub const HEADERS: [&'static str; 6] = ["table", "no", "hypersurface", "status", "diffs", "notes"];
}

pub fn cmd_verify(data: &Data, ids: &[String], row: Option<&str>, format: Format) -> Result<Outcome> {
    let selected: Vec<&ExpectedTable> = if ids.is_empty() {
        data.tables.iter().collect()
    } else {
        ids.iter()
            .map(|id| find_table(&data.tables, id).ok_or_else(|| anyhow!("no table {id:?}")))
            .collect::<Result<_>>()?
    };
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for t in selected {
        let mut table = t.clone();
        if let Some(no) = row {
            table.rows.retain(|r| r.no == no);
            if table.rows.is_empty() {
                bail!("table {} has no row {no:?}", t.id);
            }
        }
        let checks = verify_table(&table);
        let ok = checks.iter().filter(|c| c.passed()).count();
        summary.push(format!("{}: {ok}/{}", table.id, checks.len()));
        rows.extend(checks.into_iter().map(|c| VerifyRow {
            status: if c.passed() { "match" } else { "mismatch" }.into(),
            diffs: c
                .diffs
                .iter()
                .map(|d| format!("{}: listed {}, computed {}", d.column, d.expected, d.actual))
                .collect::<Vec<_>>()
                .join("; "),
            notes: c.notes.join("; "),
            table: c.table,
            no: c.no,
            hypersurface: c.hypersurface,
        }));
    }
    let code = if rows.iter().all(|r| r.status == "match") { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Outcome { stdout: render(&rows, &VerifyRow::HEADERS, format)?, summary: summary.join(", "), code })
}

pub fn cmd_search(range: &SearchRange, jobs: Option<usize>, format: Format) -> Result<Outcome> {
    let result = search(range, jobs)?;
    let rows: Vec<ReportRow> = result.successes.iter().map(ReportRow::from).collect();
    let summary = result.outcome_counts.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join(", ");
    Ok(Outcome { stdout: render(&rows, &ReportRow::HEADERS, format)?, summary, code: EXIT_OK })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub table: String,
    pub no: u32,
    pub r: u64,
    pub hypersurface: String,
    pub center: String,
    pub status: String,
    pub vol: String,
    #[serde(rename = "P2")]
    pub p2: String,
    pub chi: String,
    pub rho: String,
    pub reason: String,
}

impl FamilyRow {
    pub const HEADERS: [&'static str; 11] =
        ["table", "no", "r", "hypersurface", "center", "status", "vol", "P2", "chi", "rho", "reason"];
}

pub fn parse_kind(s: &str) -> Result<FamilyKind> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| anyhow!("unknown family kind {s:?}; expected 6r, 3r+3k or 4r+2k"))
}

/// Every listed family of `kind` with parameters `(a, b, c)` for `6r` or
/// `(a, b, k)` otherwise, evaluated at each admitted `r` in the span.
pub fn cmd_family(data: &Data, kind: &str, params: &str, span: &str, format: Format) -> Result<Outcome> {
    let kind = parse_kind(kind)?;
    let p = parse_list(params)?;
    if p.len() != 3 {
        bail!("expected three parameters a,b,c or a,b,k, got {params:?}");
    }
    let (lo, hi) = parse_span(span)?;
    let specs: Vec<&FamilySpec> = data
        .families
        .iter()
        .filter(|s| s.kind == kind && [s.a, s.b, s.c.or(s.k).unwrap_or(0)] == p[..])
        .collect();
    if specs.is_empty() {
        bail!("no listed family of kind {kind:?} with parameters {params}");
    }
    let mut rows = Vec::new();
    for spec in specs {
        for r in lo..=hi {
            let Some(inst) = family_instance(spec, r) else { continue };
            let mut row = FamilyRow {
                table: spec.table.clone(),
                no: spec.no,
                r,
                hypersurface: inst.hypersurface.to_string(),
                center: inst.center.ty.to_string(),
                status: "verified".into(),
                vol: String::new(),
                p2: String::new(),
                chi: String::new(),
                rho: String::new(),
                reason: String::new(),
            };
            match wblow::families::verify_family_member(spec, r) {
                Ok(ConstructionOutcome::Success(rep)) => {
                    row.vol = fmt_q(&rep.volume);
                    row.p2 = rep.p2.map(|x| x.to_string()).unwrap_or_default();
                    row.chi = rep.chi.to_string();
                    row.rho = rep.rho.map(|x| x.to_string()).unwrap_or_default();
                }
                Ok(ConstructionOutcome::Failure { stage, reason }) => {
                    row.status = "failed".into();
                    row.reason = format!("step {stage}: {reason}");
                }
                Err(e) => {
                    row.status = "failed".into();
                    row.reason = e.to_string();
                }
            }
            rows.push(row);
        }
    }
    let failed = rows.iter().filter(|r| r.status != "verified").count();
    let summary = format!("{} admitted members, {} verified, {failed} failed", rows.len(), rows.len() - failed);
    let code = if failed == 0 { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Outcome { stdout: render(&rows, &FamilyRow::HEADERS, format)?, summary, code })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftRow {
    pub source: String,
    pub dim: usize,
    pub lifted: String,
    pub class: String,
    pub min_margin: String,
    pub p_g_lower: String,
    pub vol: String,
    /// Volume of the amplitude-one model, blown up when the lift is not canonical.
    pub model_vol: String,
    pub can_dim: String,
    pub bound: String,
}

impl LiftRow {
    pub const HEADERS: [&'static str; 10] =
        ["source", "dim", "lifted", "class", "min_margin", "p_g_lower", "vol", "model_vol", "can_dim", "bound"];
}

pub fn cmd_lift(weights: &str, degree: u64, format: Format) -> Result<Outcome> {
    let h = WeightedHypersurface::new(parse_list(weights)?, degree)?;
    let lift = lift_hypersurface(&h)?;
    let model = amplitude_one_model(&h).ok();
    let row = LiftRow {
        source: h.to_string(),
        dim: lift.hypersurface.dim(),
        lifted: lift.hypersurface.to_string(),
        class: match lift.class {
            LiftClass::Terminal => "terminal",
            LiftClass::Canonical => "canonical",
            LiftClass::NotGuaranteed => "not_guaranteed",
        }
        .into(),
        min_margin: lift.min_margin.map(|m| m.to_string()).unwrap_or_default(),
        p_g_lower: lift.p_g_lower.map(|m| m.to_string()).unwrap_or_default(),
        vol: lift.volume.as_ref().map(fmt_q).unwrap_or_default(),
        model_vol: model.as_ref().map(|m| fmt_q(&m.volume)).unwrap_or_default(),
        can_dim: model.as_ref().map(|m| m.canonical_dimension.to_string()).unwrap_or_default(),
        bound: model.as_ref().and_then(|m| m.bound.as_ref()).map(fmt_q).unwrap_or_default(),
    };
    let summary = format!("{} lifts to dimension {}", h, row.dim);
    Ok(Outcome { stdout: render(&[row], &LiftRow::HEADERS, format)?, summary, code: EXIT_OK })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    /// `n-1` or `n-2`, the canonical dimension the bound assumes.
    pub case: String,
    pub n: u64,
    /// The requested `p_g`, raised to the least value the case allows.
    pub p_g: u64,
    pub bound: String,
}

impl BoundRow {
    pub const HEADERS: [&'static str; 4] = ["case", "n", "p_g", "bound"];
}

pub fn cmd_bounds(n: u64, p_g: u64, format: Format) -> Result<Outcome> {
    if n < 3 {
        bail!("bounds need n >= 3, got {n}");
    }
    let (p1, p2) = (p_g.max(n), p_g.max(n - 1));
    let rows = vec![
        BoundRow { case: "n-1".into(), n, p_g: p1, bound: fmt_q(&bound_nm1(n, p1)?) },
        BoundRow { case: "n-2".into(), n, p_g: p2, bound: fmt_q(&bound_nm2(n, p2)?) },
    ];
    Ok(Outcome { stdout: render(&rows, &BoundRow::HEADERS, format)?, summary: format!("n = {n}"), code: EXIT_OK })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSummary {
    pub id: String,
    pub title: String,
    pub rows: usize,
    pub columns: String,
}

impl TableSummary {
    pub const HEADERS: [&'static str; 4] = ["id", "title", "rows", "columns"];
}

/// One expected row, flattened; absent cells are empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub no: String,
    pub deg: u64,
    pub weights: String,
    pub alpha: String,
    pub b_weight: String,
    pub vol: String,
    #[serde(rename = "P2")]
    pub p2: String,
    pub chi: String,
    pub pg: String,
    pub rho: String,
    pub basket: String,
    pub delta: String,
    pub dim: String,
    pub can_dim: String,
    pub bound: String,
}

impl TableRow {
    pub const HEADERS: [&'static str; 15] = [
        "no", "deg", "weights", "alpha", "b_weight", "vol", "P2", "chi", "pg", "rho", "basket", "delta", "dim",
        "can_dim", "bound",
    ];
}

fn cell<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}

impl From<&ExpectedRow> for TableRow {
    fn from(r: &ExpectedRow) -> Self {
        let w = r.lifted_weights.as_deref().unwrap_or(&r.weights);
        TableRow {
            no: r.no.clone(),
            deg: r.deg,
            weights: format!("({})", w.iter().map(u64::to_string).collect::<Vec<_>>().join(",")),
            alpha: cell(&r.alpha),
            b_weight: cell(&r.b_weight),
            vol: r.vol.clone(),
            p2: cell(&r.p2),
            chi: cell(&r.chi),
            pg: cell(&r.pg),
            rho: cell(&r.rho),
            basket: cell(&r.basket),
            delta: cell(&r.delta),
            dim: cell(&r.dim),
            can_dim: cell(&r.can_dim),
            bound: cell(&r.bound),
        }
    }
}

/// Lists the tables, or prints the rows of one.
pub fn cmd_table(data: &Data, id: Option<&str>, format: Format) -> Result<Outcome> {
    let stdout = match id {
        None => {
            let rows: Vec<TableSummary> = data
                .tables
                .iter()
                .map(|t| TableSummary {
                    id: t.id.clone(),
                    title: t.title.clone(),
                    rows: t.rows.len(),
                    columns: t.columns.join(" "),
                })
                .collect();
            render(&rows, &TableSummary::HEADERS, format)?
        }
        Some(id) => {
            let t = find_table(&data.tables, id).ok_or_else(|| anyhow!("no table {id:?}"))?;
            let rows: Vec<TableRow> = t.rows.iter().map(TableRow::from).collect();
            render(&rows, &TableRow::HEADERS, format)?
        }
    };
    Ok(Outcome { stdout, summary: String::new(), code: EXIT_OK })
}
