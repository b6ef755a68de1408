//! Integer and rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for volumes, bounds and discrepancies.
pub type Q = BigRational;

/// Builds `num / den` as an exact rational.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integral rational.
pub fn qi(n: impl Into<BigInt>) -> Q {
    Q::from_integer(n.into())
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn gcd_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0, gcd)
}

/// Units of `Z/r`, ascending. For `r = 1` the single residue 0 counts as a unit.
pub fn units(r: u64) -> Vec<u64> {
    if r == 1 {
        return vec![0];
    }
    (1..r).filter(|&u| gcd(u, r) == 1).collect()
}

/// Smallest integer not below `x`.
pub fn ceil(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

/// Prints `p/q` in lowest terms, integers without a denominator.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Serde adapter storing a rational as its `p/q` string.
pub mod q_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Sign-aware comparison helper used when logging inequalities.
pub fn is_nonnegative(x: &Q) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(fmt_q(&q(33, 5460)), "11/1820");
        assert_eq!(fmt_q(&q(6, 1)), "6");
        assert_eq!(fmt_q(&q(-2, 4)), "-1/2");
        assert_eq!(fmt_q(&q(0, 7)), "0");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "13/30", "-7/3", "22", "62/14739"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn units_and_ceil() {
        assert_eq!(units(12), vec![1, 5, 7, 11]);
        assert_eq!(units(1), vec![0]);
        assert_eq!(ceil(&q(32, 3)), BigInt::from(11));
        assert_eq!(ceil(&q(8, 1)), BigInt::from(8));
        assert_eq!(gcd_all([10, 14, 35]), 1);
        assert_eq!(gcd_all([14, 35]), 7);
    }
}
