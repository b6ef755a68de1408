//! Acceptance suite: one line per criterion.
//!
//! A criterion may be red for a documented reason. The process fails only when
//! a criterion's state differs from the recorded expectation, so a red line is
//! never silently turned green and an unexpected regression always fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use wblow::arith::{fmt_q, q};
use wblow::bounds::{bound_nm1, bound_nm2, v_star_series};
use wblow::cyclic::{age_class, basket_pair, nabla, normalize_type, reid_tai, Classification, CyclicQuotientType};
use wblow::families::{bundled_families, family_instance, verify_family_member};
use wblow::search::{search, SearchRange};
use wblow::tables::{bundled_tables, find_table, verify_table, RowCheck};
use wblow::terminalize::{subdivision_outcomes, terminalize_type};

struct Verdict {
    pass: bool,
    detail: String,
    /// `None` when the criterion is expected green, otherwise the exact
    /// failure signature recorded for it.
    known_red: Option<&'static str>,
    /// Failure signature computed from this run.
    signature: String,
}

impl Verdict {
    fn green(pass: bool, detail: String) -> Self {
        Verdict { pass, detail, known_red: None, signature: String::new() }
    }

    fn as_expected(&self) -> bool {
        match self.known_red {
            None => self.pass,
            Some(sig) => !self.pass && self.signature == sig,
        }
    }
}

fn table(id: &str) -> Vec<RowCheck> {
    let tables = bundled_tables();
    verify_table(find_table(&tables, id).unwrap())
}

fn failing(checks: &[RowCheck]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| {
            let cols: Vec<_> = c.diffs.iter().map(|d| d.column.as_str()).collect();
            format!("{} {} [{}]", c.table, c.no, cols.join(","))
        })
        .collect()
}

fn c1_table_a() -> Verdict {
    let start = Instant::now();
    let checks = table("A");
    let secs = start.elapsed().as_secs_f64();
    let ok = checks.iter().filter(|c| c.passed()).count();
    Verdict::green(
        ok == 31 && checks.len() == 31 && secs < 60.0,
        format!("{ok}/{} rows match alpha, Vol, P2, chi, rho, basket in {secs:.1}s", checks.len()),
    )
}

fn c2_table_ap() -> Verdict {
    let checks = table("Ap");
    let ok = checks.iter().filter(|c| c.passed()).count();
    let rho_unsupported = checks.iter().all(|c| c.computed.get("rho").map(String::as_str) == Some("unsupported"));
    let basket_regression = checks.iter().all(|c| c.computed.get("basket").map(String::as_str) == Some("unsupported"));
    Verdict::green(
        ok == 15 && checks.len() == 15 && rho_unsupported && basket_regression,
        format!(
            "{ok}/15 rows match Vol, P2, chi; rho unsupported on every row: {rho_unsupported}; \
             no isolated locus, so no basket compared: {basket_regression}"
        ),
    )
}

fn c3_tables_c() -> Verdict {
    let c = table("C");
    let cp = table("C+");
    let delta = |no: &str| c.iter().find(|r| r.no == no).and_then(|r| r.computed.get("delta").cloned());
    let deltas_ok = delta("7").as_deref() == Some("0")
        && delta("11").as_deref() == Some("0")
        && delta("10").as_deref() == Some("1/30");
    let mut bad = failing(&c);
    bad.extend(failing(&cp));
    let ok = c.len() + cp.len() - bad.len();
    Verdict {
        pass: bad.is_empty() && deltas_ok,
        detail: format!(
            "{ok}/{} rows match; Delta(7) = {:?}, Delta(11) = {:?}, Delta(10) = {:?}; failing: {}",
            c.len() + cp.len(),
            delta("7").unwrap_or_default(),
            delta("11").unwrap_or_default(),
            delta("10").unwrap_or_default(),
            if bad.is_empty() { "none".into() } else { bad.join("; ") }
        ),
        known_red: Some("C+ 3 [alpha,vol,P2,pg,delta]"),
        signature: if deltas_ok { bad.join("; ") } else { "delta".into() },
    }
}

fn c4_search() -> Verdict {
    let start = Instant::now();
    let result = search(&SearchRange::default(), None).unwrap();
    let found: BTreeSet<(u64, Vec<u64>)> =
        result.successes.iter().map(|r| (r.source.degree, r.source.weights().to_vec())).collect();
    let tables = bundled_tables();
    let missing = |id: &str| -> Vec<String> {
        find_table(&tables, id)
            .unwrap()
            .rows
            .iter()
            .filter(|r| !found.contains(&(r.deg, r.weights.clone())))
            .map(|r| r.no.clone())
            .collect()
    };
    let (ma, map) = (missing("A"), missing("Ap"));
    Verdict::green(
        ma.is_empty(),
        format!(
            "{} successes in {:.1}s; Table A rows missing: {:?}; Ap rows missing: {:?}",
            result.successes.len(),
            start.elapsed().as_secs_f64(),
            ma,
            map
        ),
    )
}

fn c5_kodaira_two() -> Verdict {
    let checks = table("B");
    let bad_b = failing(&checks);
    let ok_b = checks.len() - bad_b.len();

    let mut members = 0usize;
    let mut failed_rows: BTreeMap<String, usize> = BTreeMap::new();
    for spec in bundled_families() {
        let rs: Vec<u64> = (1..=200).filter(|&r| family_instance(&spec, r).is_some()).collect();
        members += rs.len();
        let fails = rs.par_iter().filter(|&&r| verify_family_member(&spec, r).is_err()).count();
        if fails > 0 {
            failed_rows.insert(format!("{} {}", spec.table, spec.no), fails);
        }
    }
    let failed: usize = failed_rows.values().sum();
    let rows: Vec<_> = failed_rows.iter().map(|(k, v)| format!("{k} x{v}")).collect();
    Verdict {
        pass: bad_b.is_empty() && failed == 0,
        detail: format!(
            "Table B {ok_b}/{} rows match (failing: {}); families: {}/{members} admitted members with r <= 200 \
             verified, failing rows: {}",
            checks.len(),
            bad_b.join("; "),
            members - failed,
            rows.join(", ")
        ),
        known_red: Some(
            "B 3.1 [P2]; B 6.1 [P2] | 4r+2 14 x57, 4r+2 15 x15, 4r+2 4 x49, 6r 6 x32, 6r 8 x38, 6r 9 x32",
        ),
        signature: format!("{} | {}", bad_b.join("; "), rows.join(", ")),
    }
}

fn c6_lifts() -> Verdict {
    let x = table("X");
    let d = table("D");
    let vols: Vec<String> = x.iter().map(|c| c.computed.get("vol").cloned().unwrap_or_default()).collect();
    let want = ["2/3", "1/2", "1/12", "1/70"];
    let n19 = d.iter().find(|c| c.computed.get("dim").map(String::as_str) == Some("19"));
    let n19_bound = n19.and_then(|c| c.computed.get("bound").cloned()).unwrap_or_default();
    let mut bad = failing(&x);
    bad.extend(failing(&d));
    Verdict::green(
        bad.is_empty() && vols == want && n19_bound == fmt_q(&q(62, 3 * 17i64.pow(3))),
        format!(
            "X volumes {vols:?}; D {}/{} rows match Vol and bound; n = 19 bound {n19_bound}",
            d.len() - failing(&d).len(),
            d.len()
        ),
    )
}

fn ty(r: u64, a: &[u64]) -> CyclicQuotientType {
    CyclicQuotientType::from_unsigned(r, a).unwrap()
}

fn c7_terminalization() -> Verdict {
    let mut problems = Vec::new();
    let rho = |t: &CyclicQuotientType| terminalize_type(t).map(|r| r.rho_contribution).unwrap_or(u64::MAX);
    if rho(&ty(7, &[1, 2, 4])) != 3 {
        problems.push("1/7(1,2,4)".to_string());
    }
    for r in (3..=99u64).step_by(2) {
        if rho(&ty(r, &[1, 1, r - 2])) != r / 2 {
            problems.push(format!("1/{r}(1,1,{})", r - 2));
        }
    }
    let t4 = ty(4, &[1, 2, 3]);
    if rho(&t4) != 1 || terminalize_type(&t4).unwrap().basket_contribution.to_string() != "[(1,2)×2]" {
        problems.push("1/4(1,2,3)".into());
    }

    let mut types = BTreeSet::new();
    for r in 2..=30u64 {
        for a in 1..r {
            for b in a..r {
                for c in b..r {
                    let t = ty(r, &[a, b, c]);
                    if age_class(&t) == Classification::CanonicalStrict {
                        types.insert(normalize_type(&t));
                    }
                }
            }
        }
    }
    let results: Vec<Option<String>> = types
        .par_iter()
        .map(|t| {
            let rec = terminalize_type(t).ok()?;
            let leaf_sum: u64 = rec.leaves.iter().map(|l| l.cone.index()).sum();
            let outcomes = subdivision_outcomes(t).ok()?;
            let single = outcomes.len() == 1
                && outcomes.first() == Some(&(rec.rho_contribution, rec.basket_contribution.to_string()));
            (leaf_sum != t.r() || !single).then(|| t.to_string())
        })
        .collect();
    problems.extend(results.into_iter().flatten());
    Verdict::green(
        problems.is_empty(),
        format!(
            "closed forms 3, floor(r/2) for odd r <= 99, 1 and basket [(1,2)×2]; {} canonical_strict types \
             with r <= 30 give one outcome under every subdivision order with leaf indices summing to r; \
             problems: {problems:?}",
            types.len()
        ),
    )
}

fn random_unit(rng: &mut StdRng, r: u64) -> u64 {
    loop {
        let a = rng.gen_range(1..r);
        if a.gcd(&r) == 1 {
            return a;
        }
    }
}

fn c8_fuzz() -> Verdict {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut problems = Vec::new();
    for _ in 0..10_000 {
        let r = rng.gen_range(2..=500u64);
        let t = ty(r, &[random_unit(&mut rng, r), random_unit(&mut rng, r), random_unit(&mut rng, r)]);
        let u = random_unit(&mut rng, r);
        let mut moved: Vec<u64> = t.residues().iter().map(|&a| a * u % r).collect();
        moved.rotate_left(rng.gen_range(0..3));
        let moved = ty(r, &moved);
        let class = reid_tai(&t).unwrap();
        let nab = nabla(&t).unwrap();
        let invariant = [normalize_type(&t), moved].iter().all(|s| {
            reid_tai(s).unwrap() == class
                && nabla(s).unwrap() == nab
                && basket_pair(s).ok() == basket_pair(&t).ok()
        });
        let sign = match class {
            Classification::Terminal => nab > 0,
            Classification::CanonicalStrict => nab == 0,
            Classification::Noncanonical => nab < 0,
        };
        if !invariant || !sign {
            problems.push(t.to_string());
        }
    }
    let mut checked = 0usize;
    for r in 2..=60u64 {
        let units: Vec<u64> = (1..r).filter(|a| a.gcd(&r) == 1).collect();
        for (i, &a) in units.iter().enumerate() {
            for (j, &b) in units.iter().enumerate().skip(i) {
                for &c in &units[j..] {
                    // an isolated type is 1/r(1,-1,x) up to units exactly when two residues cancel
                    let form = (a + b) % r == 0 || (a + c) % r == 0 || (b + c) % r == 0;
                    let terminal = reid_tai(&ty(r, &[a, b, c])).unwrap() == Classification::Terminal;
                    checked += 1;
                    if form != terminal {
                        problems.push(format!("1/{r}({a},{b},{c})"));
                    }
                }
            }
        }
    }
    Verdict::green(
        problems.is_empty(),
        format!(
            "10000 random isolated types with r <= 500 invariant under normalization and rescaling, nabla sign \
             agrees with the class; 1/r(1,-1,b) form agrees with Reid-Tai on all {checked} isolated types \
             with r <= 60; problems: {problems:?}"
        ),
    )
}

fn c9_bounds() -> Verdict {
    let mut problems = Vec::new();
    for n in 3..=20u64 {
        let nm1 = if n <= 5 { q(2, n as i64 - 1) } else { q(Integer::div_ceil(&(8 * (n as i64 - 2)), &3), (n as i64 - 1).pow(2)) };
        let ni = n as i64;
        let nm2 = match n {
            3 => q(1, 3),
            4..=11 => q(1, (ni - 1) * (ni - 2)),
            _ => q(4 * ni - 14, 3 * (ni - 2).pow(3)),
        };
        if bound_nm1(n, n).unwrap() != nm1 {
            problems.push(format!("n-1 case at n = {n}"));
        }
        if bound_nm2(n, n - 1).unwrap() != nm2 {
            problems.push(format!("n-2 case at n = {n}"));
        }
    }
    let mut worst: f64 = 0.0;
    for n in (30..=200u64).filter(|n| n % 3 != 0) {
        let v = v_star_series(n).unwrap();
        let ratio = &v.volume / &v.n_bound;
        let dev = (ratio.to_f64().unwrap() - 9.0 / 8.0).abs();
        worst = worst.max(dev);
        if dev > 0.05 {
            problems.push(format!("ratio at n = {n}"));
        }
    }
    Verdict::green(
        problems.is_empty(),
        format!(
            "closed forms hold for 3 <= n <= 20 at minimal p_g; V_* ratio within {worst:.4} of 9/8 for \
             30 <= n <= 200; problems: {problems:?}"
        ),
    )
}

fn main() {
    let criteria: [(u8, fn() -> Verdict); 9] = [
        (1, c1_table_a),
        (2, c2_table_ap),
        (3, c3_tables_c),
        (4, c4_search),
        (5, c5_kodaira_two),
        (6, c6_lifts),
        (7, c7_terminalization),
        (8, c8_fuzz),
        (9, c9_bounds),
    ];
    let mut unexpected = Vec::new();
    for (id, f) in criteria {
        let v = f();
        let state = if v.pass { "PASS" } else { "FAIL" };
        let note = match (v.pass, v.known_red, v.as_expected()) {
            (false, Some(_), true) => " (known, documented)",
            (_, _, false) => " (UNEXPECTED)",
            _ => "",
        };
        println!("criterion {id}: {state}{note}: {}", v.detail);
        if !v.as_expected() {
            unexpected.push(id);
            if let Some(recorded) = v.known_red {
                println!("  recorded: {recorded}\n  observed: {}", v.signature);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria not in their recorded state: {unexpected:?}");
        std::process::exit(1);
    }
}
