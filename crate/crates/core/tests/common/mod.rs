//! Independent oracles shared by the integration tests.

use num_traits::Zero;
use wblow::arith::{q, Q};
use wblow::cyclic::{age_class, Classification};
use wblow::pipeline::{noether_delta, KodairaClass, MinimalModelReport};

/// Monomials of degree `m` by direct recursion.
pub fn brute_count(w: &[u64], m: u64) -> u64 {
    match w.split_first() {
        None => u64::from(m == 0),
        Some((&a, rest)) => (0..=m / a).map(|k| brute_count(rest, m - k * a)).sum(),
    }
}

/// `alpha^3 d / prod(a) - sum (r - sum e)^3 / (r prod e)`, from the recorded centers.
pub fn volume_oracle(r: &MinimalModelReport) -> Q {
    let h = &r.source;
    let prod: i64 = h.weights().iter().map(|&a| a as i64).product();
    let mut v = q(r.alpha.pow(3) * h.degree as i64, prod);
    for c in &r.centers {
        let e = c.weights();
        let s: i64 = e.iter().map(|&x| x as i64).sum();
        let rr = c.r() as i64;
        v -= q((rr - s).pow(3), rr * e.iter().map(|&x| x as i64).product::<i64>());
    }
    v
}

pub fn check_report(r: &MinimalModelReport) {
    let h = &r.source;
    assert_eq!(r.alpha, h.amplitude());
    assert_eq!(r.volume, volume_oracle(r), "{h}");
    assert!(r.volume >= Q::zero());
    assert_eq!(r.kodaira_class == KodairaClass::NumericallyZeroVolume, r.volume.is_zero());
    assert_eq!(r.centers.len(), r.blowups.len());
    for b in &r.blowups {
        assert!(b.charts.iter().all(|c| age_class(c) != Classification::Noncanonical), "{h}: {b:?}");
        assert!(b.weight_sum() < b.r());
    }
    assert!(r.certificates.iter().any(|c| c.is_nef()));
    if let Some(pg) = r.p_g {
        assert_eq!(pg, brute_count(h.weights(), r.alpha as u64));
        assert_eq!(r.chi, 1 - pg as i64);
    }
    if let Some(p2) = r.p2 {
        assert_eq!(p2, brute_count(h.weights(), 2 * r.alpha as u64));
    }
    match (&r.noether_delta, r.p_g) {
        (Some(d), Some(pg)) => {
            assert!(r.volume > Q::zero());
            assert_eq!(*d, noether_delta(&r.volume, pg));
        }
        (None, pg) => assert!(r.volume.is_zero() || pg.is_none()),
        (Some(_), None) => panic!("delta without p_g for {h}"),
    }
    if let Some(rho) = r.rho {
        assert!(rho > r.blowups.len() as u64);
    }
    assert_eq!(r.rho.is_some(), r.basket.is_some());
}
