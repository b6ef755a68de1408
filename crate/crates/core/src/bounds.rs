//! Lower bounds for canonical volumes of minimal `n`-folds of large canonical
//! dimension, and the `V_*` series that nearly attains the first of them.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{ceil, q, Q};
use crate::error::{Error, Result};
use crate::wps::{self_intersection, WeightedHypersurface};

fn require(n: u64, p_g: u64, min: u64) -> Result<()> {
    if n < 3 || p_g < min {
        return Err(Error::Precondition(format!("need n >= 3 and p_g >= {min}, got n = {n}, p_g = {p_g}")));
    }
    Ok(())
}

/// Bound for canonical dimension `n - 1`; requires `p_g >= n`.
pub fn bound_nm1(n: u64, p_g: u64) -> Result<Q> {
    require(n, p_g, n)?;
    let (n, p) = (n as i64, p_g as i64);
    let first = q(2 * (p - n + 1), n - 1);
    let inner = Q::new(BigInt::from(8 * ((n - 1) * (p - n + 1) - 1)), BigInt::from(3));
    let second = Q::new(ceil(&inner), BigInt::from((n - 1) * (n - 1)));
    Ok(first.max(second))
}

/// Bound for canonical dimension `n - 2`; requires `p_g >= n - 1`.
///
/// Three regimes: `n = 3`, `4 <= n <= 11` and `n >= 12`. The last two are
/// different formulas and do not agree at the seam.
pub fn bound_nm2(n: u64, p_g: u64) -> Result<Q> {
    require(n, p_g, n - 1)?;
    let (n, p) = (n as i64, p_g as i64);
    let t = p - n + 2;
    Ok(match n {
        3 => q(1, 3),
        4..=11 => q(t * t, (n - 2) * (t * (n - 2) + 1)),
        _ => q(2 * (2 * (n - 2) * t - 3), 3 * (n - 2).pow(3)),
    })
}

/// One member of the `V_*` series with its volume and the comparison value `N(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VStar {
    pub hypersurface: WeightedHypersurface,
    pub volume: Q,
    pub n_bound: Q,
}

/// `V_{10(k+1)} ⊂ P(1^n, 2(k+1), 5(k+1))` for `n = 3k+2` and
/// `V_{10k+6} ⊂ P(1^n, 2k+1, 5k+3)` for `n = 3k+1`.
pub fn v_star_series(n: u64) -> Result<VStar> {
    if n < 4 || n.is_multiple_of(3) {
        return Err(Error::Precondition(format!("the series is defined for n >= 4 with n not divisible by 3, got {n}")));
    }
    let k = (n / 3) as i64;
    let (tail, degree, n_bound) = if n % 3 == 2 {
        ([2 * (k + 1), 5 * (k + 1)], 10 * (k + 1), q(8 * k, (3 * k + 1).pow(2)))
    } else {
        ([2 * k + 1, 5 * k + 3], 10 * k + 6, q(8 * k - 2, 9 * k * k))
    };
    let mut w = vec![1u64; n as usize];
    w.extend(tail.iter().map(|&x| x as u64));
    let h = WeightedHypersurface::new(w, degree as u64)?;
    debug_assert_eq!(h.amplitude(), 1);
    // amplitude one, so K^n = d / prod(a)
    let volume = self_intersection(&h);
    debug_assert!(volume > Q::zero() && volume <= Q::one());
    Ok(VStar { hypersurface: h, volume, n_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_at_minimal_genus() {
        assert_eq!(bound_nm1(4, 4).unwrap(), q(2, 3));
        assert_eq!(bound_nm1(6, 6).unwrap(), q(11, 25));
        assert_eq!(bound_nm1(3, 3).unwrap(), q(1, 1));
        assert_eq!(bound_nm2(5, 4).unwrap(), q(1, 12));
        assert_eq!(bound_nm2(19, 18).unwrap(), q(62, 3 * 17i64.pow(3)));
        assert_eq!(bound_nm2(12, 11).unwrap(), q(17, 1500));
        assert!(bound_nm1(5, 4).is_err());
        assert!(bound_nm2(5, 3).is_err());
    }

    #[test]
    fn v_star_examples() {
        let v = v_star_series(5).unwrap();
        assert_eq!(v.hypersurface.weights(), &[1, 1, 1, 1, 1, 4, 10]);
        assert_eq!((v.volume.clone(), v.n_bound), (q(1, 2), q(1, 2)));
        assert_eq!(v_star_series(8).unwrap().volume, q(1, 3));
        assert_eq!(v_star_series(8).unwrap().n_bound, q(16, 49));
        assert_eq!(v_star_series(4).unwrap().volume, q(2, 3));
        assert!(v_star_series(6).is_err());
    }

    #[test]
    fn monotone_in_genus() {
        for n in 3..=20u64 {
            for p in n..40 {
                assert!(bound_nm1(n, p).unwrap() <= bound_nm1(n, p + 1).unwrap());
            }
            for p in n - 1..40 {
                assert!(bound_nm2(n, p).unwrap() <= bound_nm2(n, p + 1).unwrap());
            }
        }
    }
}
