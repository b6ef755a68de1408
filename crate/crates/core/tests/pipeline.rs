mod common;

use common::{brute_count, check_report};
use wblow::arith::fmt_q;
use wblow::pipeline::{noether_delta, plurigenus, run_construction, ConstructionOutcome};
use wblow::report::ReportRow;
use wblow::tables::bundled_tables;
use wblow::wps::WeightedHypersurface;

fn hs(w: &[u64], d: u64) -> WeightedHypersurface {
    WeightedHypersurface::new(w.to_vec(), d).unwrap()
}

#[test]
fn reference_rows_satisfy_report_invariants() {
    let mut seen = 0;
    for t in bundled_tables().iter().filter(|t| ["A", "Ap", "C", "B"].contains(&t.id.as_str())) {
        for row in &t.rows {
            let out = run_construction(&row.hypersurface().unwrap());
            let r = out.report().unwrap_or_else(|| panic!("{} {}: {out:?}", t.id, row.no));
            check_report(r);
            seen += 1;
        }
    }
    assert_eq!(seen, 31 + 15 + 11 + 46);
}

#[test]
fn worked_example_with_three_blowup_certificates() {
    let out = run_construction(&hs(&[3, 5, 7, 13, 35], 70));
    let r = out.report().unwrap();
    assert_eq!(r.b_weight(), "1/13(5,3,2)");
    assert_eq!(r.certificates.len(), 3);
    assert_eq!(r.rho, Some(9));
    assert_eq!(r.basket.as_ref().unwrap().to_string(), "[(1,2),(1,3),(1,5)×3]");
    check_report(r);
}

#[test]
fn two_point_construction() {
    let r = run_construction(&hs(&[1, 1, 4, 6, 13], 30));
    let r = r.report().unwrap();
    assert_eq!(r.centers.len(), 2);
    assert_eq!(fmt_q(&r.volume), "61/6");
    check_report(r);
}

#[test]
fn failures_report_their_stage() {
    let cases: [(&[u64], u64, u8); 4] = [
        (&[2, 2, 3, 5, 7], 19, 0),
        (&[1, 1, 1, 1, 1], 5, 1),
        (&[1, 1, 2, 2, 7], 15, 3),
        (&[1, 1, 6, 7, 9], 27, 2),
    ];
    for (w, d, stage) in cases {
        let out = run_construction(&hs(w, d));
        assert_eq!(out.stage(), Some(stage), "{w:?} {d}: {out:?}");
    }
}

#[test]
fn outcome_json_round_trip() {
    for (w, d) in [(&[3u64, 5, 7, 13, 35][..], 70), (&[1, 1, 6, 7, 9], 27), (&[1, 1, 2, 8, 9], 26)] {
        let out = run_construction(&hs(w, d));
        let json = serde_json::to_string(&out).unwrap();
        let back: ConstructionOutcome = serde_json::from_str(&json).unwrap();
        assert_eq!(back, out);
    }
}

#[test]
fn report_row_round_trip() {
    let out = run_construction(&hs(&[1, 1, 2, 8, 9], 26));
    let row = ReportRow::from(out.report().unwrap());
    assert_eq!(row.kodaira, "numerically_zero_volume");
    assert_eq!(row.delta, "");
    let back: ReportRow = serde_json::from_str(&serde_json::to_string(&row).unwrap()).unwrap();
    assert_eq!(back, row);
}

#[test]
fn plurigenera_beyond_two_are_flagged() {
    let out = run_construction(&hs(&[1, 1, 10, 14, 35], 70));
    let r = out.report().unwrap();
    let (p2, h2) = plurigenus(r, 2).unwrap();
    assert_eq!((Some(p2), h2), (r.p2, false));
    let (p3, h3) = plurigenus(r, 3).unwrap();
    assert!(h3);
    assert_eq!(p3, brute_count(r.source.weights(), 3 * r.alpha as u64));
    assert_eq!(noether_delta(&r.volume, r.p_g.unwrap()), r.noether_delta.clone().unwrap());
    assert_eq!(fmt_q(r.noether_delta.as_ref().unwrap()), "1/30");
}
