mod common;

use common::{brute_count, check_report};
use proptest::prelude::*;
use wblow::blowup::blow_up;
use wblow::bounds::{bound_nm1, bound_nm2, v_star_series};
use wblow::cyclic::{age_class, basket_pair, equivalent, nabla, normalize_type, reid_tai, Basket, Classification, CyclicQuotientType};
use wblow::locus::singular_locus;
use wblow::pipeline::run_construction;
use wblow::search::SearchRange;
use wblow::terminalize::{subdivision_outcomes, terminalize_type};
use wblow::wps::{count_monomials, is_quasismooth_general, is_well_formed_hypersurface, WeightedHypersurface, Weights};

fn sorted_weights() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..13, 5).prop_map(|mut w| {
        w.sort_unstable();
        w
    })
}

fn three_dim_type(max_r: u64) -> impl Strategy<Value = CyclicQuotientType> {
    (2..=max_r).prop_flat_map(|r| prop::collection::vec(1..r, 3).prop_map(move |a| CyclicQuotientType::from_unsigned(r, &a).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn successful_constructions_satisfy_invariants(w in sorted_weights(), extra in 1u64..8) {
        let d = w.iter().sum::<u64>() + extra;
        let h = WeightedHypersurface::new(w, d).unwrap();
        if let Some(r) = run_construction(&h).report() {
            check_report(r);
        }
    }

    #[test]
    fn construction_is_permutation_invariant(w in sorted_weights(), extra in 1u64..8, rot in 1usize..5) {
        let d = w.iter().sum::<u64>() + extra;
        let a = run_construction(&WeightedHypersurface::new(w.clone(), d).unwrap());
        let mut v = w;
        v.rotate_left(rot);
        let b = run_construction(&WeightedHypersurface::new(v, d).unwrap());
        prop_assert_eq!(a.stage(), b.stage());
        if let (Some(x), Some(y)) = (a.report(), b.report()) {
            prop_assert_eq!(&x.volume, &y.volume);
            prop_assert_eq!(x.p_g, y.p_g);
            prop_assert_eq!(x.chi, y.chi);
        }
    }

    #[test]
    fn singular_points_are_quotients_of_the_right_order(w in sorted_weights(), extra in 1u64..8) {
        let d = w.iter().sum::<u64>() + extra;
        let h = WeightedHypersurface::new(w, d).unwrap();
        if is_well_formed_hypersurface(&h) && is_quasismooth_general(&h) {
            if let Ok(locus) = singular_locus(&h) {
                for s in &locus.strata {
                    prop_assert!(h.weights().iter().any(|&a| a % s.ty.r() == 0));
                    prop_assert!(!s.ty.is_smooth());
                }
            }
        }
    }

    #[test]
    fn monomial_count_matches_recursion(w in prop::collection::vec(1u64..10, 3..6), m in 0u64..50) {
        let c = count_monomials(&Weights::new(w.clone()).unwrap(), m);
        prop_assert_eq!(c, brute_count(&w, m).into());
    }

    #[test]
    fn classification_is_a_unit_invariant(t in three_dim_type(120), k in 1u64..120) {
        let r = t.r();
        let u = (k..k + r).find(|u| num_integer::gcd(*u % r, r) == 1 && u % r != 0).map(|u| u % r).unwrap_or(1);
        let moved = CyclicQuotientType::from_unsigned(r, &t.residues().iter().map(|a| a * u % r).collect::<Vec<_>>()).unwrap();
        prop_assert!(equivalent(&t, &moved));
        prop_assert_eq!(age_class(&t), age_class(&moved));
        prop_assert_eq!(normalize_type(&t), normalize_type(&moved));
    }

    #[test]
    fn nabla_sign_is_the_class(t in three_dim_type(200)) {
        if !t.has_zero_residue() {
            let n = nabla(&t).unwrap();
            let c = reid_tai(&t).unwrap();
            prop_assert_eq!(n > 0, c == Classification::Terminal);
            prop_assert_eq!(n == 0, c == Classification::CanonicalStrict);
        }
    }

    #[test]
    fn basket_pairs_exist_exactly_for_terminal_points(t in three_dim_type(200)) {
        if wblow::cyclic::is_isolated(&t) {
            let terminal = reid_tai(&t).unwrap() == Classification::Terminal;
            prop_assert_eq!(basket_pair(&t).is_ok(), terminal);
        }
    }

    #[test]
    fn terminalization_conserves_volume_and_is_order_free(t in three_dim_type(24)) {
        if !t.has_zero_residue() && age_class(&t) == Classification::CanonicalStrict {
            let rec = terminalize_type(&t).unwrap();
            prop_assert_eq!(rec.leaves.iter().map(|l| l.cone.index()).sum::<u64>(), t.r());
            prop_assert!(rec.leaves.iter().all(|l| age_class(&l.ty) == Classification::Terminal));
            let outcomes = subdivision_outcomes(&t).unwrap();
            prop_assert_eq!(outcomes.len(), 1);
        }
    }

    #[test]
    fn blowup_discrepancy_matches_weights(a in 1u64..20, b in 1u64..20, c in 1u64..20, slack in 1u64..40) {
        let r = a + b + c + slack;
        let t = CyclicQuotientType::from_unsigned(r, &[a, b, c]).unwrap();
        if let Ok(rec) = blow_up(&t) {
            prop_assert_eq!(rec.discrepancy_coeff, wblow::arith::q((r - a - b - c) as i64, r as i64));
            prop_assert_eq!(rec.charts.len(), 3);
        }
    }

    #[test]
    fn basket_strings_round_trip(pairs in prop::collection::vec((1u64..20, 2u64..40), 0..6)) {
        let mut b = Basket::new();
        for (x, r) in pairs {
            if let Ok(p) = wblow::cyclic::BasketPair::new(x.min(r / 2).max(1), r) {
                b.add(p, 1);
            }
        }
        prop_assert_eq!(b.to_string().parse::<Basket>().unwrap(), b);
    }

    #[test]
    fn search_candidates_respect_the_range(amin in 1i64..4, aw in 0i64..3, dmin in 5u64..25, dw in 0u64..8, wmax in 1u64..12) {
        let range = SearchRange { alpha_min: amin, alpha_max: amin + aw, d_min: dmin, d_max: dmin + dw, weight_max: wmax };
        let c = range.candidates();
        for (w, d) in &c {
            let alpha = *d as i64 - w.iter().sum::<u64>() as i64;
            prop_assert!(alpha >= range.alpha_min && alpha <= range.alpha_max);
            prop_assert!(*d >= range.d_min && *d <= range.d_max);
            prop_assert!(w.windows(2).all(|p| p[0] <= p[1]) && w.iter().all(|&x| x <= wmax));
        }
        prop_assert!(c.windows(2).all(|p| (p[0].1, &p[0].0) < (p[1].1, &p[1].0)));
    }
}

#[test]
fn bounds_are_monotone_in_p_g() {
    for n in 3..=20u64 {
        for p in n..40 {
            assert!(bound_nm1(n, p).unwrap() <= bound_nm1(n, p + 1).unwrap());
        }
        for p in n - 1..40 {
            assert!(bound_nm2(n, p).unwrap() <= bound_nm2(n, p + 1).unwrap());
        }
    }
}

#[test]
fn v_star_volumes_meet_the_bound() {
    for n in (4..=50u64).filter(|n| n % 3 != 0) {
        let v = v_star_series(n).unwrap();
        assert!(v.volume >= v.n_bound, "n = {n}");
        if n >= 7 {
            assert!(v.volume > v.n_bound, "n = {n}");
        }
    }
}
