//! Singular locus of a general quasismooth 3-fold hypersurface `X_d ⊂ P(a_0..a_4)`.
//!
//! Singular points sit at coordinate vertices and along coordinate edges whose
//! two weights share a factor. Indices always refer to positions in the
//! hypersurface's own weight vector.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, gcd_all};
use crate::cyclic::CyclicQuotientType;
use crate::error::{Error, Result};
use crate::wps::{is_quasismooth_general, is_well_formed_hypersurface, WeightedHypersurface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Vertex(usize),
    Edge(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumKind {
    IsolatedPoints(u64),
    Curve,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SingularStratum {
    pub location: Location,
    pub kind: StratumKind,
    /// For curves, the transverse type `1/e(0,a,b)`.
    #[serde(rename = "type")]
    pub ty: CyclicQuotientType,
}

impl SingularStratum {
    pub fn point_count(&self) -> u64 {
        match self.kind {
            StratumKind::IsolatedPoints(c) => c,
            StratumKind::Curve => 0,
        }
    }

    pub fn is_curve(&self) -> bool {
        self.kind == StratumKind::Curve
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularLocus {
    pub strata: Vec<SingularStratum>,
}

impl SingularLocus {
    pub fn has_non_isolated(&self) -> bool {
        self.strata.iter().any(SingularStratum::is_curve)
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }
}

fn check_threefold(h: &WeightedHypersurface) -> Result<()> {
    let a = h.weights();
    if a.len() != 5 {
        return Err(Error::Precondition(format!("{h} is not a 3-fold hypersurface")));
    }
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                if gcd_all([a[i], a[j], a[k]]) != 1 {
                    return Err(Error::HypothesisViolated(format!(
                        "gcd({},{},{}) > 1 in {h}",
                        a[i], a[j], a[k]
                    )));
                }
            }
        }
    }
    Ok(())
}

fn others(len: usize, skip: &[usize]) -> impl Iterator<Item = usize> + '_ {
    (0..len).filter(move |k| !skip.contains(k))
}

/// Indices `j != i` such that `x_i^m x_j` has degree `d`, ascending.
///
/// Each gives a coordinate eliminated near the vertex `P_i`; the vertex then
/// lies on the coordinate line `{x_i, x_j}`.
pub fn vertex_partners(h: &WeightedHypersurface, i: usize) -> Vec<usize> {
    let a = h.weights();
    let d = h.degree;
    others(a.len(), &[i])
        .filter(|&j| d >= a[j] && (d - a[j]).is_multiple_of(a[i]))
        .collect()
}

/// Type of the vertex `P_i`, or `None` when `P_i` is not on `X`.
pub fn vertex_type(h: &WeightedHypersurface, i: usize) -> Result<Option<CyclicQuotientType>> {
    check_threefold(h)?;
    vertex_type_unchecked(h, i)
}

fn vertex_type_unchecked(h: &WeightedHypersurface, i: usize) -> Result<Option<CyclicQuotientType>> {
    let a = h.weights();
    let r = a[i];
    if h.degree.is_multiple_of(r) {
        return Ok(None);
    }
    let j = *vertex_partners(h, i).first().ok_or_else(|| {
        Error::QuasismoothnessViolated(format!("no monomial x_{i}^m x_j of degree {} in {h}", h.degree))
    })?;
    let rest: Vec<u64> = others(a.len(), &[i, j]).map(|k| a[k]).collect();
    Ok(Some(CyclicQuotientType::from_unsigned(r, &rest)?))
}

/// Stratum on the open edge `P_i P_j`, present when `gcd(a_i, a_j) > 1`.
pub fn edge_strata(h: &WeightedHypersurface, i: usize, j: usize) -> Result<Option<SingularStratum>> {
    check_threefold(h)?;
    edge_strata_unchecked(h, i, j)
}

fn edge_strata_unchecked(h: &WeightedHypersurface, i: usize, j: usize) -> Result<Option<SingularStratum>> {
    let a = h.weights();
    let d = h.degree;
    let e = gcd(a[i], a[j]);
    if e == 1 {
        return Ok(None);
    }
    let location = Location::Edge(i.min(j), i.max(j));
    if d.is_multiple_of(e) {
        let count = e * d / (a[i] * a[j]);
        if count == 0 {
            return Ok(None);
        }
        let rest: Vec<u64> = others(a.len(), &[i, j]).map(|k| a[k]).collect();
        return Ok(Some(SingularStratum {
            location,
            kind: StratumKind::IsolatedPoints(count),
            ty: CyclicQuotientType::from_unsigned(e, &rest)?,
        }));
    }
    let k = others(a.len(), &[i, j])
        .find(|&k| d >= a[k] && (d - a[k]).is_multiple_of(e))
        .ok_or_else(|| Error::QuasismoothnessViolated(format!("edge ({i},{j}) of {h}")))?;
    let mut residues = vec![0];
    residues.extend(others(a.len(), &[i, j, k]).map(|l| a[l]));
    Ok(Some(SingularStratum {
        location,
        kind: StratumKind::Curve,
        ty: CyclicQuotientType::from_unsigned(e, &residues)?,
    }))
}

/// All vertex strata (by index) followed by all edge strata (lexicographic).
pub fn singular_locus(h: &WeightedHypersurface) -> Result<SingularLocus> {
    check_threefold(h)?;
    if !is_well_formed_hypersurface(h) {
        return Err(Error::Precondition(format!("{h} is not well-formed")));
    }
    if !is_quasismooth_general(h) {
        return Err(Error::Precondition(format!("{h} is not quasismooth")));
    }
    let n = h.weights().len();
    let mut strata = Vec::new();
    for i in 0..n {
        if let Some(ty) = vertex_type_unchecked(h, i)? {
            if !ty.is_smooth() {
                strata.push(SingularStratum {
                    location: Location::Vertex(i),
                    kind: StratumKind::IsolatedPoints(1),
                    ty,
                });
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if let Some(s) = edge_strata_unchecked(h, i, j)? {
                strata.push(s);
            }
        }
    }
    Ok(SingularLocus { strata })
}

/// Types of the `(alpha+2)`-fold `X_d ⊂ P(1^{alpha-1}, a)`, one entry per point.
pub fn lift_singular_locus(h3: &WeightedHypersurface, alpha: i64) -> Result<Vec<CyclicQuotientType>> {
    if alpha < 2 || alpha != h3.amplitude() {
        return Err(Error::Precondition(format!(
            "lift needs alpha = amplitude >= 2, got alpha = {alpha} for {h3}"
        )));
    }
    let locus = singular_locus(h3)?;
    if locus.has_non_isolated() {
        return Err(Error::NonIsolated(h3.to_string()));
    }
    let mut out = Vec::new();
    for s in &locus.strata {
        let mut res = vec![1u64; alpha as usize - 1];
        res.extend_from_slice(s.ty.residues());
        let ty = CyclicQuotientType::from_unsigned(s.ty.r(), &res)?;
        for _ in 0..s.point_count() {
            out.push(ty.clone());
        }
    }
    Ok(out)
}
