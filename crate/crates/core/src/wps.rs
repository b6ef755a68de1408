//! Weighted projective spaces and hypersurfaces in them.
//!
//! Weights are kept in the order they were given. Every check here is exact
//! integer arithmetic.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, gcd_all, Q};
use crate::error::{Error, Result};

/// Ordered weight vector `(a_1, ..., a_m)`, every entry at least 1, `m >= 3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Weights(Vec<u64>);

impl Weights {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.len() < 3 {
            return Err(Error::InvalidWeights(format!(
                "need at least 3 weights, got {}",
                entries.len()
            )));
        }
        if entries.contains(&0) {
            return Err(Error::InvalidWeights("weights must be positive".into()));
        }
        Ok(Weights(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension of a hypersurface in this space.
    pub fn dim(&self) -> usize {
        self.0.len() - 2
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Ascending copy, used as a deduplication key.
    pub fn sorted(&self) -> Weights {
        let mut v = self.0.clone();
        v.sort_unstable();
        Weights(v)
    }
}

impl TryFrom<Vec<u64>> for Weights {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Weights::new(v)
    }
}

impl From<Weights> for Vec<u64> {
    fn from(w: Weights) -> Vec<u64> {
        w.0
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// A general hypersurface `X_d` in `P(weights)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedHypersurface {
    pub weights: Weights,
    pub degree: u64,
}

impl WeightedHypersurface {
    pub fn new(weights: Vec<u64>, degree: u64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidWeights("degree must be positive".into()));
        }
        Ok(WeightedHypersurface { weights: Weights::new(weights)?, degree })
    }

    pub fn weights(&self) -> &[u64] {
        self.weights.entries()
    }

    pub fn dim(&self) -> usize {
        self.weights.dim()
    }

    /// `alpha = d - sum(a_i)`; the canonical sheaf is `O(alpha)`.
    pub fn amplitude(&self) -> i64 {
        self.degree as i64 - self.weights.sum() as i64
    }
}

impl fmt::Display for WeightedHypersurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X_{} in P{}", self.degree, self.weights)
    }
}

/// Exponent vector of a monomial, one entry per weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialExponent(pub Vec<u64>);

impl MonomialExponent {
    pub fn degree(&self, weights: &[u64]) -> u64 {
        self.0.iter().zip(weights).map(|(e, a)| e * a).sum()
    }
}

pub fn is_well_formed_space(w: &Weights) -> bool {
    well_formed_slice(w.entries())
}

pub(crate) fn well_formed_slice(a: &[u64]) -> bool {
    (0..a.len()).all(|i| gcd_all(a.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x)) == 1)
}

pub fn is_well_formed_hypersurface(h: &WeightedHypersurface) -> bool {
    let a = h.weights();
    if !well_formed_slice(a) {
        return false;
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let g = gcd_all(
                a.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &x)| x),
            );
            if !h.degree.is_multiple_of(g) {
                return false;
            }
        }
    }
    true
}

/// `reach[s]` is true iff `s` is a non-negative combination of `values`, for `s <= limit`.
#[cfg(test)]
pub(crate) fn representable(values: &[u64], limit: u64) -> Vec<bool> {
    let mut reach = vec![false; limit as usize + 1];
    reach[0] = true;
    for &v in values {
        close_under(&mut reach, v);
    }
    reach
}

fn close_under(reach: &mut [bool], v: u64) {
    let v = v as usize;
    for s in v..reach.len() {
        if reach[s - v] {
            reach[s] = true;
        }
    }
}

/// Quasismoothness of the general member of degree `d`.
///
/// Only the set of weight values used by an index subset matters, and among
/// subsets with the same value set the one taking every index of those values
/// is the hardest to satisfy, so the test runs over subsets of distinct values.
pub fn is_quasismooth_general(h: &WeightedHypersurface) -> bool {
    let d = h.degree;
    if h.weights().contains(&d) {
        return true;
    }
    let mut values: Vec<(u64, u64)> = Vec::new();
    let mut sorted = h.weights().to_vec();
    sorted.sort_unstable();
    for a in sorted {
        match values.last_mut() {
            Some((v, c)) if *v == a => *c += 1,
            _ => values.push((a, 1)),
        }
    }
    let mut reach = vec![false; d as usize + 1];
    reach[0] = true;
    let mut chosen = vec![false; values.len()];
    subsets_ok(&values, d, 0, &mut chosen, &reach, false)
}

fn subsets_ok(
    values: &[(u64, u64)],
    d: u64,
    pos: usize,
    chosen: &mut Vec<bool>,
    reach: &[bool],
    nonempty: bool,
) -> bool {
    if pos == values.len() {
        if !nonempty || reach[d as usize] {
            return true;
        }
        let need: u64 = values.iter().zip(chosen.iter()).filter(|(_, &c)| c).map(|((_, c), _)| c).sum();
        let have: u64 = values
            .iter()
            .zip(chosen.iter())
            .filter(|&(&(v, _), &c)| !c && v <= d && reach[(d - v) as usize])
            .map(|(&(_, c), _)| c)
            .sum();
        return have >= need;
    }
    chosen[pos] = false;
    if !subsets_ok(values, d, pos + 1, chosen, reach, nonempty) {
        return false;
    }
    let mut with = reach.to_vec();
    close_under(&mut with, values[pos].0);
    chosen[pos] = true;
    let ok = subsets_ok(values, d, pos + 1, chosen, &with, true);
    chosen[pos] = false;
    ok
}

/// Number of exponent vectors of weighted degree `m`.
pub fn count_monomials(w: &Weights, m: u64) -> BigUint {
    count_monomials_slice(w.entries(), m)
}

pub(crate) fn count_monomials_slice(a: &[u64], m: u64) -> BigUint {
    let mut ways = vec![BigUint::zero(); m as usize + 1];
    ways[0] = BigUint::one();
    for &v in a {
        let v = v as usize;
        for s in v..ways.len() {
            let add = ways[s - v].clone();
            ways[s] += add;
        }
    }
    ways.swap_remove(m as usize)
}

/// All exponent vectors of weighted degree `m`, lexicographically descending.
pub fn enumerate_monomials(w: &Weights, m: u64) -> Vec<MonomialExponent> {
    enumerate_monomials_slice(w.entries(), m)
}

pub(crate) fn enumerate_monomials_slice(a: &[u64], m: u64) -> Vec<MonomialExponent> {
    // suffix_reach[i][s]: s is representable by a[i..]
    let n = a.len();
    let mut suffix_reach = vec![vec![false; m as usize + 1]; n + 1];
    suffix_reach[n][0] = true;
    for i in (0..n).rev() {
        let mut r = suffix_reach[i + 1].clone();
        close_under(&mut r, a[i]);
        suffix_reach[i] = r;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u64; n];
    fill(a, 0, m, &suffix_reach, &mut cur, &mut out);
    out
}

fn fill(
    a: &[u64],
    i: usize,
    rest: u64,
    reach: &[Vec<bool>],
    cur: &mut Vec<u64>,
    out: &mut Vec<MonomialExponent>,
) {
    if i == a.len() {
        if rest == 0 {
            out.push(MonomialExponent(cur.clone()));
        }
        return;
    }
    for e in (0..=rest / a[i]).rev() {
        let left = rest - e * a[i];
        if reach[i + 1][left as usize] {
            cur[i] = e;
            fill(a, i + 1, left, reach, cur, out);
        }
    }
    cur[i] = 0;
}

/// `d / prod(a_i)`, the top self-intersection of `O_X(1)`.
pub fn self_intersection(h: &WeightedHypersurface) -> Q {
    let prod: BigInt = h.weights().iter().map(|&a| BigInt::from(a)).product();
    Q::new(BigInt::from(h.degree), prod)
}

/// Removes common factors from a plane `P(a,b,c)` carrying degree `d`.
///
/// A factor common to all three weights is removed first. Each further step
/// divides the two weights sharing a factor `q` (and `d`) by `q`, until the
/// triple is pairwise coprime.
pub fn well_formize_plane(a: u64, b: u64, c: u64, d: u64) -> Result<(u64, u64, u64, u64)> {
    let g = gcd_all([a, b, c]);
    if !d.is_multiple_of(g) {
        return Err(Error::DegreeNotTransportable { degree: d, factor: g });
    }
    let mut w = [a / g, b / g, c / g];
    let mut d = d / g;
    loop {
        let mut changed = false;
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let q = gcd(w[j], w[k]);
            if q > 1 {
                if !d.is_multiple_of(q) {
                    return Err(Error::DegreeNotTransportable { degree: d, factor: q });
                }
                w[j] /= q;
                w[k] /= q;
                d /= q;
                changed = true;
            }
        }
        if !changed {
            return Ok((w[0], w[1], w[2], d));
        }
    }
}
