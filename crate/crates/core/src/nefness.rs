//! Nefness of `K_Y` after weighted blow-ups of one or two points, and the
//! plane-curve irreducibility test it depends on.
//!
//! Coordinates are addressed by their index in the hypersurface's weight
//! vector. A center lists its local coordinates (in the order of its blow-up
//! weights) and the two coordinates spanning the line it lies on.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, gcd_all, units};
use crate::cyclic::CyclicQuotientType;
use crate::error::{Error, Result};
use crate::wps::{
    count_monomials_slice, enumerate_monomials_slice, well_formed_slice, well_formize_plane,
    MonomialExponent, WeightedHypersurface,
};

/// A point `Q` on a coordinate line, with its blow-up weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CenterSpec {
    /// `1/r(e_1..e_n)`; the residues are the blow-up weights.
    #[serde(rename = "type")]
    pub ty: CyclicQuotientType,
    /// Local coordinate for each `e_i`.
    pub local: Vec<usize>,
    /// The two coordinates not vanishing at `Q`.
    pub line: (usize, usize),
}

impl CenterSpec {
    pub fn weights(&self) -> &[u64] {
        self.ty.residues()
    }

    pub fn r(&self) -> u64 {
        self.ty.r()
    }

    fn slack(&self) -> u64 {
        self.ty.r() - self.weights().iter().sum::<u64>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NefnessQuery {
    pub hypersurface: WeightedHypersurface,
    pub centers: Vec<CenterSpec>,
    /// Position of the pivot inside `centers[0].local`.
    pub pivot: usize,
}

impl NefnessQuery {
    pub fn one_point(hypersurface: WeightedHypersurface, center: CenterSpec, pivot: usize) -> Self {
        NefnessQuery { hypersurface, centers: vec![center], pivot }
    }

    pub fn two_points(hypersurface: WeightedHypersurface, q1: CenterSpec, q2: CenterSpec) -> Self {
        let pivot = q1.local.len().saturating_sub(1);
        NefnessQuery { hypersurface, centers: vec![q1, q2], pivot }
    }

    /// Weight indices in the order `(local coordinates of Q_1, line)`, i.e. `b_1..b_{n+2}`.
    pub fn permutation(&self) -> Vec<usize> {
        let c = &self.centers[0];
        let mut p = c.local.clone();
        p.push(c.line.0);
        p.push(c.line.1);
        p
    }

    pub fn b_weights(&self) -> Vec<u64> {
        let a = self.hypersurface.weights();
        self.permutation().iter().map(|&i| a[i]).collect()
    }
}

/// Whether a general plane curve of a given degree is irreducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Irreducibility {
    Irreducible,
    /// The degree-`d` monomials are exactly `g1^i g2^(k-i)`.
    Reducible { g1: MonomialExponent, g2: MonomialExponent, k: u64 },
    Inconclusive { reason: String },
}

/// General curve of degree `d` in `P(a,b,c)`, after removing common factors.
pub fn plane_curve_irreducible(a: u64, b: u64, c: u64, d: u64) -> Irreducibility {
    let (a, b, c, d) = match well_formize_plane(a, b, c, d) {
        Ok(t) => t,
        Err(e) => return Irreducibility::Inconclusive { reason: e.to_string() },
    };
    let w = [a, b, c];
    let monos = enumerate_monomials_slice(&w, d);
    if monos.len() < 2 {
        return Irreducibility::Inconclusive {
            reason: format!("fewer than two monomials of degree {d} in P({a},{b},{c})"),
        };
    }
    if (0..3).any(|v| monos.iter().all(|m| m.0[v] > 0)) {
        return Irreducibility::Inconclusive {
            reason: format!("degree-{d} monomials of P({a},{b},{c}) share a variable"),
        };
    }
    let verdict = match pencil_power_witness(&w, d, &monos) {
        Some((g1, g2, k)) => Irreducibility::Reducible { g1, g2, k },
        None => Irreducibility::Irreducible,
    };
    debug_assert!(
        !remark_shortcut(&monos) || verdict == Irreducibility::Irreducible,
        "shortcut disagrees with exhaustive check on P({a},{b},{c}) degree {d}"
    );
    verdict
}

/// Exhaustive search for `k | d` and `g1, g2` of degree `d/k` whose powers
/// `g1^i g2^(k-i)` are exactly `monos`.
fn pencil_power_witness(
    w: &[u64],
    d: u64,
    monos: &[MonomialExponent],
) -> Option<(MonomialExponent, MonomialExponent, u64)> {
    let target: BTreeSet<&MonomialExponent> = monos.iter().collect();
    for k in 2..=d {
        if !d.is_multiple_of(k) || monos.len() as u64 != k + 1 {
            continue;
        }
        let gens = enumerate_monomials_slice(w, d / k);
        for (x, g1) in gens.iter().enumerate() {
            for g2 in &gens[x + 1..] {
                let powers: BTreeSet<MonomialExponent> = (0..=k)
                    .map(|i| MonomialExponent((0..3).map(|v| i * g1.0[v] + (k - i) * g2.0[v]).collect()))
                    .collect();
                if powers.len() == target.len() && powers.iter().all(|m| target.contains(m)) {
                    return Some((g1.clone(), g2.clone(), k));
                }
            }
        }
    }
    None
}

/// The two sufficient patterns for "not a pencil power".
fn remark_shortcut(monos: &[MonomialExponent]) -> bool {
    let supp = |m: &MonomialExponent| -> [bool; 3] { [m.0[0] > 0, m.0[1] > 0, m.0[2] > 0] };
    let has = |s: [bool; 3]| monos.iter().any(|m| supp(m) == s);
    if has([true, true, false]) && has([false, true, true]) && has([true, false, true]) {
        return true;
    }
    (0..3).any(|x| {
        let (y, z) = ((x + 1) % 3, (x + 2) % 3);
        monos.iter().any(|p| {
            p.0[y] == 0
                && p.0[z] == 0
                && p.0[x] > 0
                && monos
                    .iter()
                    .any(|m| m.0[x] == 0 && gcd(gcd(p.0[x], m.0[y]), m.0[z]) == 1)
        })
    })
}

/// One instantiated inequality `lhs >= rhs` (or a boolean check).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub condition: u8,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum NefVerdict {
    Nef,
    Failed { condition: u8 },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NefnessCertificate {
    pub pivot: usize,
    pub verdict: NefVerdict,
    pub conditions: Vec<ConditionRecord>,
    /// `n - 1` when nef.
    pub numerical_kodaira_lower: Option<usize>,
}

impl NefnessCertificate {
    pub fn is_nef(&self) -> bool {
        self.verdict == NefVerdict::Nef
    }

    fn conclude(pivot: usize, n: usize, conditions: Vec<ConditionRecord>, irr: &Irreducibility, irr_id: u8) -> Self {
        let verdict = if let Some(c) = conditions.iter().find(|c| !c.holds && c.condition != irr_id) {
            NefVerdict::Failed { condition: c.condition }
        } else {
            match irr {
                Irreducibility::Irreducible => NefVerdict::Nef,
                Irreducibility::Reducible { .. } => NefVerdict::Failed { condition: irr_id },
                Irreducibility::Inconclusive { reason } => NefVerdict::Inconclusive { reason: reason.clone() },
            }
        };
        let numerical_kodaira_lower = (verdict == NefVerdict::Nef).then_some(n - 1);
        NefnessCertificate { pivot, verdict, conditions, numerical_kodaira_lower }
    }
}

fn geq(condition: u8, label: String, lhs: BigInt, rhs: BigInt) -> ConditionRecord {
    ConditionRecord { condition, holds: lhs >= rhs, detail: format!("{label}: {lhs} >= {rhs}") }
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn check_center(h: &WeightedHypersurface, c: &CenterSpec, stage: &str) -> Result<()> {
    let a = h.weights();
    let n = h.dim();
    let e = c.weights();
    if c.local.len() != n || e.len() != n {
        return Err(Error::Precondition(format!("{stage}: need {n} local coordinates")));
    }
    let mut all: Vec<usize> = c.local.clone();
    all.push(c.line.0);
    all.push(c.line.1);
    all.sort_unstable();
    if all != (0..a.len()).collect::<Vec<_>>() {
        return Err(Error::Precondition(format!("{stage}: local coordinates and line must partition the variables")));
    }
    if e.contains(&0) || c.ty.is_smooth() {
        return Err(Error::Precondition(format!("{stage}: blow-up weights must be positive")));
    }
    if gcd_all(e.iter().copied()) != 1 {
        return Err(Error::Precondition(format!("{stage}: gcd of {e:?} is not 1")));
    }
    let r = c.r();
    if e.iter().sum::<u64>() >= r {
        return Err(Error::Precondition(format!("{stage}: sum of {e:?} is not below r = {r}")));
    }
    let aligned = units(r)
        .into_iter()
        .any(|u| c.local.iter().zip(e).all(|(&l, &ei)| ei % r == a[l] * u % r));
    if !aligned {
        return Err(Error::Precondition(format!(
            "{stage}: weights {e:?} do not match the local coordinates of a 1/{r} point"
        )));
    }
    if count_monomials_slice(&[a[c.line.0], a[c.line.1]], h.degree) == 0u32.into() {
        return Err(Error::Precondition(format!(
            "{stage}: the line x_{} x_{} lies in X",
            c.line.0, c.line.1
        )));
    }
    Ok(())
}

fn check_amplitude(h: &WeightedHypersurface) -> Result<i64> {
    let alpha = h.amplitude();
    if alpha <= 0 {
        return Err(Error::Precondition(format!("amplitude {alpha} of {h} is not positive")));
    }
    Ok(alpha)
}

/// One-point criterion with the query's pivot.
pub fn check_nefness(q: &NefnessQuery) -> Result<NefnessCertificate> {
    let h = &q.hypersurface;
    let alpha = check_amplitude(h)?;
    let c = q.centers.first().ok_or_else(|| Error::Precondition("no center given".into()))?;
    if q.centers.len() != 1 {
        return Err(Error::Precondition("one-point criterion needs exactly one center".into()));
    }
    check_center(h, c, "center")?;
    let n = h.dim();
    let k = q.pivot;
    if k >= n {
        return Err(Error::Precondition(format!("pivot {k} out of range")));
    }
    let a = h.weights();
    let e = c.weights();
    let s = c.slack();
    let alpha = BigInt::from(alpha);
    let mut log = Vec::new();
    for j in (0..n).filter(|&j| j != k) {
        log.push(geq(
            1,
            format!("alpha*e_{j} >= b_{j}*(r-sum e)"),
            &alpha * big(e[j]),
            big(a[c.local[j]]) * big(s),
        ));
    }
    let (bk, b1, b2) = (a[c.local[k]], a[c.line.0], a[c.line.1]);
    log.push(geq(
        2,
        "alpha*d*r*e_k >= b_k*b_{n+1}*b_{n+2}*(r-sum e)".into(),
        &alpha * big(h.degree) * big(c.r()) * big(e[k]),
        big(bk) * big(b1) * big(b2) * big(s),
    ));
    let irr = plane_curve_irreducible(bk, b1, b2, h.degree);
    log.push(ConditionRecord {
        condition: 3,
        holds: irr == Irreducibility::Irreducible,
        detail: format!("general X_{} in P({bk},{b1},{b2}): {irr:?}", h.degree),
    });
    log.push(ConditionRecord {
        condition: 4,
        holds: well_formed_slice(e),
        detail: format!("P{e:?} well-formed"),
    });
    Ok(NefnessCertificate::conclude(k, n, log, &irr, 3))
}

/// Two-point criterion.
///
/// `q1` lies on the line `{x_{n+1}, x_{n+2}}` with local coordinates
/// `x_1..x_n`; `q2` lies on `{x_n, x_{n+2}}` with local coordinates
/// `x_1..x_{n-1}, x_{n+1}`. The first `n-1` local coordinates must agree.
pub fn check_nefness_two_points(q: &NefnessQuery) -> Result<NefnessCertificate> {
    let h = &q.hypersurface;
    let alpha = check_amplitude(h)?;
    let [c1, c2] = q.centers.as_slice() else {
        return Err(Error::Precondition("two-point criterion needs exactly two centers".into()));
    };
    check_center(h, c1, "first center")?;
    check_center(h, c2, "second center")?;
    let n = h.dim();
    let (p, s1) = (c1.local[n - 1], c2.local[n - 1]);
    let t = if c1.line.0 == s1 { c1.line.1 } else { c1.line.0 };
    let geometry_ok = c1.local[..n - 1] == c2.local[..n - 1]
        && (c1.line.0 == s1 || c1.line.1 == s1)
        && ((c2.line == (p, t)) || (c2.line == (t, p)));
    if !geometry_ok {
        return Err(Error::Precondition("centers are not on the required pair of lines".into()));
    }
    let a = h.weights();
    let (e, f) = (c1.weights(), c2.weights());
    let (sl1, sl2) = (c1.slack(), c2.slack());
    let alpha = BigInt::from(alpha);
    let mut log = Vec::new();
    for j in 0..n - 1 {
        let bj = big(a[c1.local[j]]);
        log.push(geq(1, format!("alpha*e_{j} >= b_{j}*(r1-sum e)"), &alpha * big(e[j]), &bj * big(sl1)));
    }
    for j in 0..n - 1 {
        let bj = big(a[c1.local[j]]);
        log.push(geq(2, format!("alpha*f_{j} >= b_{j}*(r2-sum f)"), &alpha * big(f[j]), &bj * big(sl2)));
    }
    let (bn, bn1, bn2) = (a[p], a[s1], a[t]);
    let (lhs, rhs) = two_point_volume_inequality(
        &alpha,
        h.degree,
        [bn, bn1, bn2],
        (c1.r(), sl1, e[n - 1]),
        (c2.r(), sl2, f[n - 1]),
    );
    log.push(geq(3, "alpha*d*r1*e_n*r2*f_n >= b_n*b_{n+1}*b_{n+2}*(s1*r2*f_n + s2*r1*e_n)".into(), lhs, rhs));
    let irr = plane_curve_irreducible(bn, bn1, bn2, h.degree);
    log.push(ConditionRecord {
        condition: 4,
        holds: irr == Irreducibility::Irreducible,
        detail: format!("general X_{} in P({bn},{bn1},{bn2}): {irr:?}", h.degree),
    });
    log.push(ConditionRecord {
        condition: 5,
        holds: well_formed_slice(e) && well_formed_slice(f),
        detail: format!("P{e:?} and P{f:?} well-formed"),
    });
    Ok(NefnessCertificate::conclude(n - 1, n, log, &irr, 4))
}

/// `alpha d / (b b' b'') >= s1/(r1 e_n) + s2/(r2 f_n)` cleared of denominators.
///
/// Each center is `(r, r - sum, last weight)`.
pub fn two_point_volume_inequality(
    alpha: &BigInt,
    d: u64,
    b: [u64; 3],
    c1: (u64, u64, u64),
    c2: (u64, u64, u64),
) -> (BigInt, BigInt) {
    let (r1, s1, en) = (big(c1.0), big(c1.1), big(c1.2));
    let (r2, s2, f_n) = (big(c2.0), big(c2.1), big(c2.2));
    let lhs = alpha * big(d) * &r1 * &en * &r2 * &f_n;
    let rhs = big(b[0]) * big(b[1]) * big(b[2]) * (s1 * &r2 * &f_n + s2 * &r1 * &en);
    (lhs, rhs)
}
