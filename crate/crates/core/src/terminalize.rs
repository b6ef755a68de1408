//! Crepant terminalization of canonical 3-dimensional cyclic quotient points.
//!
//! Everything is scaled by `r`: the lattice `N = Z^3 + Z a/r` becomes the
//! integer lattice `r Z^3 + Z a`, the age of a point `w` is `sum(w) / r`, and
//! the index of a cone with generator matrix `G` is `|det G| / r^2`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::cyclic::{age_class, basket_pair, Basket, Classification, CyclicQuotientType};
use crate::error::{Error, Result};

pub type V3 = [i64; 3];

/// A point of `N`, stored as its numerators over `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub numerators: V3,
    pub denominator: u64,
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.numerators.iter().fold(self.denominator, |g, &x| gcd(g, x as u64));
        let [a, b, c] = self.numerators.map(|x| x / g as i64);
        write!(f, "({a},{b},{c})/{}", self.denominator / g)
    }
}

/// Simplicial cone in the lattice of `lattice`; generators are scaled by `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ToricCone {
    pub lattice: CyclicQuotientType,
    pub generators: [V3; 3],
}

impl ToricCone {
    /// The positive octant, whose affine toric variety is the quotient itself.
    pub fn octant(t: &CyclicQuotientType) -> Self {
        let r = t.r() as i64;
        ToricCone { lattice: t.clone(), generators: [[r, 0, 0], [0, r, 0], [0, 0, r]] }
    }

    /// Lattice multiplicity `[N : <generators>]`.
    pub fn index(&self) -> u64 {
        let r = self.lattice.r() as i128;
        (det3(&self.generators).unsigned_abs() / (r * r) as u128) as u64
    }
}

fn det3(g: &[V3; 3]) -> i128 {
    let m = |i: usize, j: usize| g[j][i] as i128;
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

/// `sign(det) * adj(G) * v`, so the barycentric coordinates of `v` are this over `|det|`.
fn scaled_coords(g: &[V3; 3], v: &V3) -> [i128; 3] {
    let m = |i: usize, j: usize| g[j][i] as i128;
    let adj = [
        [m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1), m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2), m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)],
        [m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2), m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0), m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)],
        [m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0), m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1), m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)],
    ];
    let s = det3(g).signum();
    let mut out = [0i128; 3];
    for (i, row) in adj.iter().enumerate() {
        out[i] = s * (0..3).map(|k| row[k] * v[k] as i128).sum::<i128>();
    }
    out
}

/// Barycentric numerators (over `|det G|`) of the elements of `N / <G>`.
fn group_elements(c: &ToricCone) -> Vec<[i128; 3]> {
    let d = det3(&c.generators).abs();
    let r = c.lattice.r() as i64;
    let a = c.lattice.residues();
    let gens: Vec<[i128; 3]> = [[r, 0, 0], [0, r, 0], [0, 0, r], [a[0] as i64, a[1] as i64, a[2] as i64]]
        .iter()
        .map(|v| scaled_coords(&c.generators, v).map(|x| x.rem_euclid(d)))
        .collect();
    let mut seen: BTreeSet<[i128; 3]> = BTreeSet::new();
    let mut queue = vec![[0i128; 3]];
    seen.insert([0; 3]);
    while let Some(mu) = queue.pop() {
        for g in &gens {
            let next = [0, 1, 2].map(|i| (mu[i] + g[i]) % d);
            if seen.insert(next) {
                queue.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

fn point_of(c: &ToricCone, mu: &[i128; 3]) -> V3 {
    let d = det3(&c.generators).abs();
    [0, 1, 2].map(|k| ((0..3).map(|i| mu[i] * c.generators[i][k] as i128).sum::<i128>() / d) as i64)
}

/// Age-one points of `N` inside the half-open parallelepiped of `c`, lexicographically ascending.
fn cone_age_one_points(c: &ToricCone) -> Vec<V3> {
    let r = c.lattice.r() as i64;
    let mut pts: Vec<V3> = group_elements(c)
        .iter()
        .filter(|mu| mu.iter().any(|&x| x != 0))
        .map(|mu| point_of(c, mu))
        .filter(|w| w.iter().sum::<i64>() == r)
        .collect();
    pts.sort_unstable();
    pts
}

/// Quotient type of the affine toric variety of `c`.
pub fn cone_quotient_type(c: &ToricCone) -> Result<CyclicQuotientType> {
    let d = det3(&c.generators).abs();
    if d == 0 {
        return Err(Error::InvalidType("cone is not full-dimensional".into()));
    }
    let idx = c.index();
    if idx == 1 {
        return Ok(CyclicQuotientType::smooth(3));
    }
    let elems = group_elements(c);
    if elems.len() as u64 != idx {
        return Err(Error::InvalidType(format!("generators of {c:?} do not lie in N")));
    }
    let gen = elems
        .iter()
        .find(|mu| {
            let g = mu.iter().fold(d, |g, &x| gcd_i(g, x));
            (d / g) as u64 == idx
        })
        .ok_or_else(|| Error::InvalidType(format!("N/<G> is not cyclic for {:?}", c.generators)))?;
    let res: Vec<u64> = gen.iter().map(|&x| (x * idx as i128 / d) as u64).collect();
    CyclicQuotientType::from_unsigned(idx, &res)
}

fn gcd_i(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Points `({m a_i / r})_i` of age exactly one, for `m = 1..r-1`, first occurrence order.
pub fn age_one_points(t: &CyclicQuotientType) -> Vec<LatticePoint> {
    let r = t.r();
    let mut seen = HashSet::new();
    (1..r)
        .map(|m| {
            let mut v = [0i64; 3];
            for (slot, &a) in v.iter_mut().zip(t.residues()) {
                *slot = (m * a % r) as i64;
            }
            v
        })
        .filter(|v| v.iter().sum::<i64>() == r as i64 && seen.insert(*v))
        .map(|numerators| LatticePoint { numerators, denominator: r })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaf {
    pub cone: ToricCone,
    #[serde(rename = "type")]
    pub ty: CyclicQuotientType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalizationRecord {
    pub input: CyclicQuotientType,
    pub age_one_points: Vec<LatticePoint>,
    pub rho_contribution: u64,
    pub basket_contribution: Basket,
    pub leaves: Vec<Leaf>,
}

fn check_input(t: &CyclicQuotientType) -> Result<Classification> {
    if t.dim() != 3 {
        return Err(Error::InvalidType(format!("{t} is not 3-dimensional")));
    }
    if t.has_zero_residue() {
        return Err(Error::ZeroResidue(t.to_string()));
    }
    match age_class(t) {
        Classification::Noncanonical => Err(Error::Noncanonical(t.to_string())),
        c => Ok(c),
    }
}

fn leaf_of(cone: ToricCone) -> Result<Leaf> {
    let ty = cone_quotient_type(&cone)?;
    if age_class(&ty) != Classification::Terminal {
        return Err(Error::InvalidType(format!("leaf {ty} is not terminal")));
    }
    Ok(Leaf { cone, ty })
}

fn basket_of(leaves: &[Leaf]) -> Result<Basket> {
    let mut b = Basket::new();
    for l in leaves.iter().filter(|l| !l.ty.is_smooth()) {
        b.add(basket_pair(&l.ty)?, 1);
    }
    Ok(b)
}

/// Star subdivision at the lexicographically least age-one point, recursively.
pub fn terminalize_type(t: &CyclicQuotientType) -> Result<TerminalizationRecord> {
    check_input(t)?;
    let mut leaves = Vec::new();
    let mut stack = vec![ToricCone::octant(t)];
    while let Some(cone) = stack.pop() {
        match cone_age_one_points(&cone).first() {
            None => leaves.push(leaf_of(cone)?),
            Some(p) => stack.extend(star_subdivide(&cone, p).into_iter().rev()),
        }
    }
    let total: u64 = leaves.iter().map(|l| l.cone.index()).sum();
    assert_eq!(total, t.r(), "lattice volume not conserved for {t}");
    let points = age_one_points(t);
    Ok(TerminalizationRecord {
        input: t.clone(),
        rho_contribution: points.len() as u64,
        age_one_points: points,
        basket_contribution: basket_of(&leaves)?,
        leaves,
    })
}

/// Subcones obtained by replacing each generator with positive weight by `p`.
fn star_subdivide(c: &ToricCone, p: &V3) -> Vec<ToricCone> {
    let lam = scaled_coords(&c.generators, p);
    (0..3)
        .filter(|&i| lam[i] > 0)
        .map(|i| {
            let mut g = c.generators;
            g[i] = *p;
            ToricCone { lattice: c.lattice.clone(), generators: g }
        })
        .collect()
}

fn contains(c: &ToricCone, p: &V3) -> bool {
    scaled_coords(&c.generators, p).iter().all(|&x| x >= 0)
}

type FanKey = Vec<[V3; 3]>;

fn fan_key(cones: &[ToricCone]) -> FanKey {
    let mut k: FanKey = cones
        .iter()
        .map(|c| {
            let mut g = c.generators;
            g.sort_unstable();
            g
        })
        .collect();
    k.sort_unstable();
    k
}

/// Every `(rho, basket)` reachable by inserting the age-one points as rays in
/// any order, each insertion star-subdividing every cone containing the point.
pub fn exhaustive_outcomes(t: &CyclicQuotientType) -> Result<BTreeSet<(u64, String)>> {
    check_input(t)?;
    let points: Vec<V3> = age_one_points(t).iter().map(|p| p.numerators).collect();
    let mut visited: HashSet<FanKey> = HashSet::new();
    let mut outcomes = BTreeSet::new();
    let mut stack: Vec<(Vec<ToricCone>, Vec<bool>)> = vec![(vec![ToricCone::octant(t)], vec![false; points.len()])];
    while let Some((fan, used)) = stack.pop() {
        if used.iter().all(|&u| u) {
            let leaves = fan.into_iter().map(leaf_of).collect::<Result<Vec<_>>>()?;
            let total: u64 = leaves.iter().map(|l| l.cone.index()).sum();
            assert_eq!(total, t.r(), "lattice volume not conserved for {t}");
            outcomes.insert((points.len() as u64, basket_of(&leaves)?.to_string()));
            continue;
        }
        for (i, p) in points.iter().enumerate().filter(|&(i, _)| !used[i]) {
            let next: Vec<ToricCone> = fan
                .iter()
                .flat_map(|c| if contains(c, p) { star_subdivide(c, p) } else { vec![c.clone()] })
                .collect();
            if visited.insert(fan_key(&next)) {
                let mut u = used.clone();
                u[i] = true;
                stack.push((next, u));
            }
        }
    }
    Ok(outcomes)
}

/// Every basket reachable from `c` by star subdivisions at its age-one
/// points in any order. Cones sharing a face are treated as independent, so
/// the result contains every outcome of the coupled process on a whole fan.
fn basket_closure(c: &ToricCone, memo: &mut HashMap<[V3; 3], BTreeSet<Basket>>) -> Result<BTreeSet<Basket>> {
    let mut key = c.generators;
    key.sort_unstable();
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let points = cone_age_one_points(c);
    let mut out = BTreeSet::new();
    if points.is_empty() {
        out.insert(basket_of(&[leaf_of(c.clone())?])?);
    }
    for p in &points {
        let subs = star_subdivide(c, p);
        let total: u64 = subs.iter().map(ToricCone::index).sum();
        assert_eq!(total, c.index(), "lattice volume not conserved subdividing {:?}", c.generators);
        let mut acc: BTreeSet<Basket> = [Basket::new()].into();
        for s in &subs {
            let part = basket_closure(s, memo)?;
            acc = acc
                .iter()
                .flat_map(|a| {
                    part.iter().map(move |b| {
                        let mut m = a.clone();
                        m.extend(b);
                        m
                    })
                })
                .collect();
        }
        out.extend(acc);
    }
    memo.insert(key, out.clone());
    Ok(out)
}

/// A set of `(rho, basket)` containing the outcome of every subdivision
/// order. It may over-approximate, so a single element proves that the
/// terminalization does not depend on the order.
pub fn subdivision_outcomes(t: &CyclicQuotientType) -> Result<BTreeSet<(u64, String)>> {
    check_input(t)?;
    let rho = age_one_points(t).len() as u64;
    let baskets = basket_closure(&ToricCone::octant(t), &mut HashMap::new())?;
    Ok(baskets.into_iter().map(|b| (rho, b.to_string())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> CyclicQuotientType {
        s.parse().unwrap()
    }

    #[test]
    fn age_one_examples() {
        let pts: Vec<V3> = age_one_points(&t("1/7(1,2,4)")).iter().map(|p| p.numerators).collect();
        assert_eq!(pts, vec![[1, 2, 4], [2, 4, 1], [4, 1, 2]]);
        let pts = age_one_points(&t("1/4(1,2,3)"));
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].to_string(), "(1,0,1)/2");
        assert_eq!(age_one_points(&t("1/9(1,1,7)")).len(), 4);
    }

    #[test]
    fn terminalize_examples() {
        let rec = terminalize_type(&t("1/7(1,2,4)")).unwrap();
        assert_eq!(rec.rho_contribution, 3);
        assert!(rec.basket_contribution.is_empty());
        assert!(rec.leaves.iter().all(|l| l.ty.is_smooth()));

        let rec = terminalize_type(&t("1/4(1,2,3)")).unwrap();
        assert_eq!(rec.rho_contribution, 1);
        assert_eq!(rec.basket_contribution.to_string(), "[(1,2)×2]");

        let rec = terminalize_type(&t("1/3(1,1,1)")).unwrap();
        assert_eq!(rec.rho_contribution, 1);
        assert!(rec.basket_contribution.is_empty());

        let rec = terminalize_type(&t("1/2(1,1,1)")).unwrap();
        assert_eq!(rec.rho_contribution, 0);
        assert_eq!(rec.basket_contribution.to_string(), "[(1,2)]");
        assert_eq!(rec.leaves.len(), 1);

        assert!(matches!(terminalize_type(&t("1/13(3,4,5)")), Err(Error::Noncanonical(_))));
    }

    #[test]
    fn cone_type_examples() {
        let base = t("1/7(1,2,4)");
        let ty = cone_quotient_type(&ToricCone::octant(&base)).unwrap();
        assert!(crate::cyclic::equivalent(&ty, &base));
        let lattice = t("1/4(1,2,3)");
        let c = ToricCone { lattice, generators: [[0, 4, 0], [0, 0, 4], [2, 0, 2]] };
        assert!(crate::cyclic::equivalent(&cone_quotient_type(&c).unwrap(), &t("1/2(1,1,1)")));
        let c = ToricCone { lattice: t("1/1(0,0,0)"), generators: [[1, 0, 0], [0, 1, 0], [0, 0, 1]] };
        assert!(cone_quotient_type(&c).unwrap().is_smooth());
    }

    #[test]
    fn rho_closed_form_small() {
        for r in (3..=25u64).step_by(2) {
            let ty = CyclicQuotientType::from_unsigned(r, &[1, 1, r - 2]).unwrap();
            assert_eq!(terminalize_type(&ty).unwrap().rho_contribution, r / 2);
        }
    }

    #[test]
    fn independence_small() {
        for s in ["1/7(1,2,4)", "1/4(1,2,3)", "1/9(1,1,7)", "1/6(1,2,3)"] {
            let ty = t(s);
            let outcomes = exhaustive_outcomes(&ty).unwrap();
            let rec = terminalize_type(&ty).unwrap();
            assert_eq!(outcomes.len(), 1, "{s}: {outcomes:?}");
            let (rho, basket) = outcomes.into_iter().next().unwrap();
            assert_eq!(rho, rec.rho_contribution);
            assert_eq!(basket, rec.basket_contribution.to_string());
        }
    }

    #[test]
    fn closure_contains_every_order() {
        for s in ["1/7(1,2,4)", "1/4(1,2,3)", "1/9(1,1,7)", "1/6(1,2,3)", "1/12(1,4,7)", "1/15(1,4,10)"] {
            let ty = t(s);
            let exact = exhaustive_outcomes(&ty).unwrap();
            let closure = subdivision_outcomes(&ty).unwrap();
            assert!(exact.is_subset(&closure), "{s}");
            assert_eq!(closure.len(), 1, "{s}: {closure:?}");
        }
    }
}
