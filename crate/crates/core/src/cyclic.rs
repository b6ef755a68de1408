//! Cyclic quotient singularities `1/r(a_1, ..., a_n)` and Reid baskets.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, gcd_all, units};
use crate::error::{Error, Result};

/// The germ `C^n / mu_r` acting with weights `residues`.
///
/// Residues are stored reduced into `[0, r)`. `r = 1` with all residues 0
/// is the smooth marker.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicQuotientType {
    r: u64,
    residues: Vec<u64>,
}

impl CyclicQuotientType {
    pub fn new(r: u64, residues: &[i64]) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidType("index r must be positive".into()));
        }
        if residues.is_empty() {
            return Err(Error::InvalidType("at least one residue is required".into()));
        }
        let residues = residues.iter().map(|&a| a.rem_euclid(r as i64) as u64).collect();
        Ok(CyclicQuotientType { r, residues })
    }

    pub fn from_unsigned(r: u64, residues: &[u64]) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidType("index r must be positive".into()));
        }
        if residues.is_empty() {
            return Err(Error::InvalidType("at least one residue is required".into()));
        }
        Ok(CyclicQuotientType { r, residues: residues.iter().map(|a| a % r).collect() })
    }

    pub fn smooth(n: usize) -> Self {
        CyclicQuotientType { r: 1, residues: vec![0; n] }
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn dim(&self) -> usize {
        self.residues.len()
    }

    pub fn is_smooth(&self) -> bool {
        self.r == 1
    }

    pub fn has_zero_residue(&self) -> bool {
        self.r > 1 && self.residues.contains(&0)
    }

    /// No pseudo-reflections: dropping any one residue leaves a generator of `Z/r`.
    pub fn is_small(&self) -> bool {
        (0..self.residues.len()).all(|i| {
            gcd_all(
                std::iter::once(self.r)
                    .chain(self.residues.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &a)| a)),
            ) == 1
        })
    }

    /// `min_{k=1..r-1} sum_i (k a_i mod r)`, the smallest age times `r`.
    pub fn min_age_sum(&self) -> u64 {
        (1..self.r)
            .map(|k| self.residues.iter().map(|&a| k * a % self.r).sum::<u64>())
            .min()
            .unwrap_or(u64::MAX)
    }
}

impl fmt::Display for CyclicQuotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(", self.r)?;
        for (i, a) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for CyclicQuotientType {
    type Err = Error;

    /// Accepts `1/r(a,b,...)` with optional spaces and signed residues.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a cyclic quotient type: {s:?}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = t.strip_prefix("1/").ok_or_else(bad)?;
        let (r, rest) = rest.split_once('(').ok_or_else(bad)?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        let r: u64 = r.parse().map_err(|_| bad())?;
        let residues = body
            .split(',')
            .map(|x| x.parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        CyclicQuotientType::new(r, &residues)
    }
}

impl Serialize for CyclicQuotientType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CyclicQuotientType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Reid–Tai verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Noncanonical,
    CanonicalStrict,
    Terminal,
}

impl Classification {
    pub fn at_worst_canonical(self) -> bool {
        self != Classification::Noncanonical
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Noncanonical => "noncanonical",
            Classification::CanonicalStrict => "canonical_strict",
            Classification::Terminal => "terminal",
        })
    }
}

/// Lexicographically least sorted residue vector over all unit rescalings.
pub fn normalize_type(t: &CyclicQuotientType) -> CyclicQuotientType {
    let r = t.r;
    let best = units(r)
        .into_iter()
        .map(|u| {
            let mut v: Vec<u64> = t.residues.iter().map(|&a| a * u % r).collect();
            v.sort_unstable();
            v
        })
        .min()
        .expect("units(r) is never empty");
    CyclicQuotientType { r, residues: best }
}

pub fn equivalent(a: &CyclicQuotientType, b: &CyclicQuotientType) -> bool {
    a.r == b.r && a.dim() == b.dim() && normalize_type(a) == normalize_type(b)
}

/// Reid–Tai classification of an isolated-style type.
pub fn reid_tai(t: &CyclicQuotientType) -> Result<Classification> {
    if t.is_smooth() {
        return Ok(Classification::Terminal);
    }
    if t.has_zero_residue() {
        return Err(Error::ZeroResidue(t.to_string()));
    }
    Ok(age_class(t))
}

/// The same age test, allowed on types with zero residues (transverse curve
/// types and quotients whose residues share factors with `r`).
pub fn age_class(t: &CyclicQuotientType) -> Classification {
    if t.is_smooth() {
        return Classification::Terminal;
    }
    let m = t.min_age_sum();
    match m.cmp(&t.r) {
        std::cmp::Ordering::Greater => Classification::Terminal,
        std::cmp::Ordering::Equal => Classification::CanonicalStrict,
        std::cmp::Ordering::Less => Classification::Noncanonical,
    }
}

/// `min_j sum_i (j e_i mod r) - r`; positive exactly on terminal types.
pub fn nabla(t: &CyclicQuotientType) -> Result<i64> {
    if t.r <= 1 {
        return Err(Error::InvalidType(format!("nabla needs r > 1, got {t}")));
    }
    if t.has_zero_residue() {
        return Err(Error::ZeroResidue(t.to_string()));
    }
    Ok(t.min_age_sum() as i64 - t.r as i64)
}

pub fn is_isolated(t: &CyclicQuotientType) -> bool {
    t.residues.iter().all(|&a| gcd(a, t.r) == 1)
}

/// A terminal 3-fold point `1/r(1,-1,b)` recorded as `(b, r)` with `b <= r/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasketPair {
    pub b: u64,
    pub r: u64,
}

impl BasketPair {
    pub fn new(b: u64, r: u64) -> Result<Self> {
        if r < 2 || b == 0 || 2 * b > r || gcd(b, r) != 1 {
            return Err(Error::InvalidType(format!("({b},{r}) is not a basket pair")));
        }
        Ok(BasketPair { b, r })
    }
}

impl Ord for BasketPair {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.r, self.b).cmp(&(other.r, other.b))
    }
}

impl PartialOrd for BasketPair {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasketPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.b, self.r)
    }
}

/// Basket pair of a terminal 3-dimensional type.
pub fn basket_pair(t: &CyclicQuotientType) -> Result<BasketPair> {
    if t.dim() != 3 || t.is_smooth() || reid_tai(t)? != Classification::Terminal {
        return Err(Error::NotTerminal(t.to_string()));
    }
    let r = t.r;
    for u in units(r) {
        let mut v: Vec<u64> = t.residues.iter().map(|&a| a * u % r).collect();
        let Some(i) = v.iter().position(|&x| x == 1) else { continue };
        v.swap_remove(i);
        let Some(j) = v.iter().position(|&x| x == r - 1) else { continue };
        v.swap_remove(j);
        let b = v[0];
        return BasketPair::new(b.min(r - b), r);
    }
    Err(Error::NotTerminal(format!("{t} has no 1/r(1,-1,b) form")))
}

/// Multiset of basket pairs, iterated in `(r, b)` order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Basket(BTreeMap<BasketPair, u64>);

impl Basket {
    pub fn new() -> Self {
        Basket::default()
    }

    pub fn add(&mut self, p: BasketPair, mult: u64) {
        if mult > 0 {
            *self.0.entry(p).or_insert(0) += mult;
        }
    }

    pub fn extend(&mut self, other: &Basket) {
        for (&p, &m) in &other.0 {
            self.add(p, m);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of points counted with multiplicity.
    pub fn len(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasketPair, u64)> + '_ {
        self.0.iter().map(|(&p, &m)| (p, m))
    }
}

impl FromIterator<BasketPair> for Basket {
    fn from_iter<I: IntoIterator<Item = BasketPair>>(iter: I) -> Self {
        let mut b = Basket::new();
        for p in iter {
            b.add(p, 1);
        }
        b
    }
}

impl fmt::Display for Basket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (p, m)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
            if m > 1 {
                write!(f, "×{m}")?;
            }
        }
        write!(f, "]")
    }
}

impl FromStr for Basket {
    type Err = Error;

    /// Accepts `[(b,r)×m,...]`; `x` and `*` are accepted for `×`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a basket: {s:?}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(bad)?;
        let mut basket = Basket::new();
        let mut rest = body;
        while !rest.is_empty() {
            rest = rest.strip_prefix(',').unwrap_or(rest);
            let inner = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = inner.find(')').ok_or_else(bad)?;
            let (b, r) = inner[..close].split_once(',').ok_or_else(bad)?;
            let pair = BasketPair::new(b.parse().map_err(|_| bad())?, r.parse().map_err(|_| bad())?)?;
            rest = &inner[close + 1..];
            let mut mult = 1;
            for sep in ['×', 'x', '*'] {
                if let Some(after) = rest.strip_prefix(sep) {
                    let end = after.find(|c: char| !c.is_ascii_digit()).unwrap_or(after.len());
                    mult = after[..end].parse().map_err(|_| bad())?;
                    rest = &after[end..];
                    break;
                }
            }
            basket.add(pair, mult);
        }
        Ok(basket)
    }
}

impl Serialize for Basket {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Basket {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
