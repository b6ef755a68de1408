//! The end-to-end construction: check the hypersurface, locate its unique
//! noncanonical point, blow it up so that `K` becomes nef, check the new
//! singularities, terminalize, and read off the invariants.
//!
//! Failure stages: 0 well-formed/quasismooth, 1 singular locus, 2 nefness,
//! 3 singularities after blow-up, 4 terminalization.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_all, qi, units, Q};
use crate::blowup::{blow_up, volume_after_blowups, BlowUpRecord};
use crate::cyclic::{age_class, basket_pair, Basket, Classification, CyclicQuotientType};
use crate::locus::{singular_locus, vertex_partners, Location, SingularLocus, SingularStratum};
use crate::nefness::{check_nefness, check_nefness_two_points, CenterSpec, NefnessCertificate, NefnessQuery};
use crate::terminalize::terminalize_type;
use crate::wps::{
    count_monomials_slice, is_quasismooth_general, is_well_formed_hypersurface, self_intersection,
    WeightedHypersurface,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KodairaClass {
    GeneralType,
    /// `K` nef with `K^n = 0`, so `nu = n - 1`.
    NumericallyZeroVolume,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalModelReport {
    pub source: WeightedHypersurface,
    pub alpha: i64,
    /// Weight indices in the order `(local coordinates, line)` of the first center.
    pub permutation: Vec<usize>,
    pub centers: Vec<CenterSpec>,
    pub blowups: Vec<BlowUpRecord>,
    /// One certificate per pivot for the winning center presentation.
    pub certificates: Vec<NefnessCertificate>,
    #[serde(with = "crate::arith::q_string")]
    pub volume: Q,
    /// `None` when the monomial count does not compute the plurigenus.
    pub p_g: Option<u64>,
    pub p2: Option<u64>,
    pub chi: i64,
    /// `None` when the singular locus is not isolated.
    pub rho: Option<u64>,
    pub basket: Option<Basket>,
    #[serde(with = "opt_q")]
    pub noether_delta: Option<Q>,
    pub kodaira_class: KodairaClass,
}

mod opt_q {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&crate::arith::fmt_q(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| crate::arith::parse_q(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

impl MinimalModelReport {
    /// `1/r(e_1,..,e_n)` with the blow-up weights of the first center.
    pub fn b_weight(&self) -> String {
        self.centers.first().map(|c| c.ty.to_string()).unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum ConstructionOutcome {
    Success(Box<MinimalModelReport>),
    Failure { stage: u8, reason: String },
}

impl ConstructionOutcome {
    pub fn report(&self) -> Option<&MinimalModelReport> {
        match self {
            ConstructionOutcome::Success(r) => Some(r),
            ConstructionOutcome::Failure { .. } => None,
        }
    }

    pub fn stage(&self) -> Option<u8> {
        match self {
            ConstructionOutcome::Success(_) => None,
            ConstructionOutcome::Failure { stage, .. } => Some(*stage),
        }
    }
}

fn fail(stage: u8, reason: impl Into<String>) -> ConstructionOutcome {
    ConstructionOutcome::Failure { stage, reason: reason.into() }
}

/// `Vol - (4/3) p_g + 10/3`.
pub fn noether_delta(volume: &Q, p_g: u64) -> Q {
    volume - Q::new(BigInt::from(4 * p_g), BigInt::from(3)) + Q::new(BigInt::from(10), BigInt::from(3))
}

/// A possible presentation of one noncanonical point for the nefness test.
#[derive(Debug, Clone)]
struct PointSite {
    r: u64,
    local: Vec<usize>,
    line: (usize, usize),
}

/// Lines through the point carried by `s`, ascending by partner index.
fn sites(h: &WeightedHypersurface, s: &SingularStratum) -> Vec<PointSite> {
    let n = h.weights().len();
    let rest = |skip: (usize, usize)| (0..n).filter(|&k| k != skip.0 && k != skip.1).collect::<Vec<_>>();
    match s.location {
        Location::Vertex(i) => vertex_partners(h, i)
            .into_iter()
            .map(|j| PointSite { r: s.ty.r(), local: rest((i, j)), line: (i, j) })
            .collect(),
        Location::Edge(i, j) => vec![PointSite { r: s.ty.r(), local: rest((i, j)), line: (i, j) }],
    }
}

/// Admissible blow-up weights `e_l = u a_l mod r`, ascending in `u`.
fn presentations(h: &WeightedHypersurface, site: &PointSite) -> Vec<CenterSpec> {
    let a = h.weights();
    let r = site.r;
    units(r)
        .into_iter()
        .filter_map(|u| {
            let e: Vec<u64> = site.local.iter().map(|&l| a[l] * u % r).collect();
            let ok = !e.contains(&0) && gcd_all(e.iter().copied()) == 1 && e.iter().sum::<u64>() < r;
            ok.then(|| CenterSpec {
                ty: CyclicQuotientType::from_unsigned(r, &e).expect("r > 0"),
                local: site.local.clone(),
                line: site.line,
            })
        })
        .collect()
}

fn charts_canonical(rec: &BlowUpRecord) -> bool {
    rec.charts.iter().all(|c| age_class(c).at_worst_canonical())
}

struct Winner {
    centers: Vec<CenterSpec>,
    blowups: Vec<BlowUpRecord>,
    certificates: Vec<NefnessCertificate>,
}

/// Runs the construction on a 3-fold hypersurface.
pub fn run_construction(h: &WeightedHypersurface) -> ConstructionOutcome {
    if h.dim() != 3 {
        return fail(0, format!("{h} is not a 3-fold hypersurface"));
    }
    if !is_well_formed_hypersurface(h) {
        return fail(0, "not well-formed");
    }
    if !is_quasismooth_general(h) {
        return fail(0, "not quasismooth");
    }
    let locus = match singular_locus(h) {
        Ok(l) => l,
        Err(e) => return fail(1, e.to_string()),
    };
    if let Some(c) = locus.strata.iter().find(|s| s.is_curve() && age_class(&s.ty) == Classification::Noncanonical) {
        return fail(1, format!("noncanonical curve of transverse type {}", c.ty));
    }
    let bad: Vec<&SingularStratum> = locus
        .strata
        .iter()
        .filter(|s| !s.is_curve() && age_class(&s.ty) == Classification::Noncanonical)
        .collect();
    let count: u64 = bad.iter().map(|s| s.point_count()).sum();
    let winner = match count {
        0 => return fail(1, "no noncanonical point"),
        1 => one_point(h, bad[0]),
        2 if bad.len() == 2 => two_points(h, bad[0], bad[1]),
        2 => return fail(1, "two noncanonical points on the same line are not supported"),
        k => return fail(1, format!("{k} noncanonical points")),
    };
    let winner = match winner {
        Ok(w) => w,
        Err(outcome) => return outcome,
    };
    finish(h, &locus, &bad, winner)
}

fn one_point(h: &WeightedHypersurface, q: &SingularStratum) -> Result<Winner, ConstructionOutcome> {
    if h.amplitude() <= 0 {
        return Err(fail(2, format!("amplitude {} is not positive", h.amplitude())));
    }
    let mut nef_seen = false;
    for site in sites(h, q) {
        for center in presentations(h, &site) {
            let certs: Vec<NefnessCertificate> = (0..h.dim())
                .filter_map(|k| check_nefness(&NefnessQuery::one_point(h.clone(), center.clone(), k)).ok())
                .collect();
            if !certs.iter().any(NefnessCertificate::is_nef) {
                continue;
            }
            nef_seen = true;
            let Ok(rec) = blow_up(&center.ty) else { continue };
            if charts_canonical(&rec) {
                return Ok(Winner { centers: vec![center], blowups: vec![rec], certificates: certs });
            }
        }
    }
    Err(if nef_seen {
        fail(3, format!("every nef blow-up of {} leaves a noncanonical point", q.ty))
    } else {
        fail(2, format!("no presentation of {} satisfies the nefness criterion", q.ty))
    })
}

fn two_points(h: &WeightedHypersurface, p: &SingularStratum, q: &SingularStratum) -> Result<Winner, ConstructionOutcome> {
    if h.amplitude() <= 0 {
        return Err(fail(2, format!("amplitude {} is not positive", h.amplitude())));
    }
    let mut geometry_seen = false;
    let mut nef_seen = false;
    for (first, second) in [(p, q), (q, p)] {
        for s1 in sites(h, first) {
            for s2 in sites(h, second) {
                let Some((site1, site2)) = align_two_sites(&s1, &s2) else { continue };
                geometry_seen = true;
                for c1 in presentations(h, &site1) {
                    for c2 in presentations(h, &site2) {
                        let query = NefnessQuery::two_points(h.clone(), c1.clone(), c2.clone());
                        let Ok(cert) = check_nefness_two_points(&query) else { continue };
                        if !cert.is_nef() {
                            continue;
                        }
                        nef_seen = true;
                        let (Ok(r1), Ok(r2)) = (blow_up(&c1.ty), blow_up(&c2.ty)) else { continue };
                        if charts_canonical(&r1) && charts_canonical(&r2) {
                            return Ok(Winner { centers: vec![c1, c2], blowups: vec![r1, r2], certificates: vec![cert] });
                        }
                    }
                }
            }
        }
    }
    Err(match (geometry_seen, nef_seen) {
        (false, _) => fail(1, "two noncanonical points not on a pair of lines sharing one coordinate"),
        (true, false) => fail(2, "no presentation satisfies the two-point nefness criterion"),
        (true, true) => fail(3, "every nef two-point blow-up leaves a noncanonical point"),
    })
}

/// Arranges two sites so the first lies on `{s, t}` with local coordinates
/// `L + [p]` and the second on `{p, t}` with local coordinates `L + [s]`.
fn align_two_sites(a: &PointSite, b: &PointSite) -> Option<(PointSite, PointSite)> {
    let la = [a.line.0, a.line.1];
    let lb = [b.line.0, b.line.1];
    let shared: Vec<usize> = la.iter().copied().filter(|x| lb.contains(x)).collect();
    let [t] = shared.as_slice() else { return None };
    let s = if la[0] == *t { la[1] } else { la[0] };
    let p = if lb[0] == *t { lb[1] } else { lb[0] };
    let common: Vec<usize> = a.local.iter().copied().filter(|&x| x != p).collect();
    let mut la_local = common.clone();
    la_local.push(p);
    let mut lb_local = common;
    lb_local.push(s);
    Some((
        PointSite { r: a.r, local: la_local, line: (s, *t) },
        PointSite { r: b.r, local: lb_local, line: (p, *t) },
    ))
}

fn finish(h: &WeightedHypersurface, locus: &SingularLocus, centers: &[&SingularStratum], w: Winner) -> ConstructionOutcome {
    let alpha = h.amplitude();
    let kx = self_intersection(h) * qi(BigInt::from(alpha).pow(3));
    let volume = match volume_after_blowups(&kx, &w.blowups, 3) {
        Ok(v) => v,
        Err(e) => return fail(3, e.to_string()),
    };
    let a = h.weights();
    let count = |m: i64| count_monomials_slice(a, m as u64).to_u64();
    // h^0(mK) is the monomial count while every blow-up has m (r - sum e) < r
    let gate = |m: u64| w.blowups.iter().all(|b| m * (b.r() - b.weight_sum()) < b.r());
    let p_g = if gate(1) { count(alpha) } else { None };
    let p2 = if gate(2) { count(2 * alpha) } else { None };
    let h0k = count(alpha).unwrap_or(u64::MAX);
    let chi = 1 - h0k as i64;

    let mut points: Vec<(CyclicQuotientType, u64)> = Vec::new();
    for s in locus.strata.iter().filter(|s| !s.is_curve()) {
        let is_center = centers.iter().any(|c| std::ptr::eq(*c, s));
        if !is_center {
            points.push((s.ty.clone(), s.point_count()));
        }
    }
    for rec in &w.blowups {
        for c in rec.charts.iter().filter(|c| !c.is_smooth()) {
            points.push((c.clone(), 1));
        }
    }
    let isolated = !locus.has_non_isolated() && points.iter().all(|(t, _)| !t.has_zero_residue());
    let (rho, basket) = if isolated {
        let mut rho = 1 + w.blowups.len() as u64;
        let mut basket = Basket::new();
        for (t, m) in &points {
            match age_class(t) {
                Classification::Terminal => match basket_pair(t) {
                    Ok(p) => basket.add(p, *m),
                    Err(e) => return fail(4, e.to_string()),
                },
                Classification::CanonicalStrict => match terminalize_type(t) {
                    Ok(rec) => {
                        rho += m * rec.rho_contribution;
                        for (p, k) in rec.basket_contribution.iter() {
                            basket.add(p, k * m);
                        }
                    }
                    Err(e) => return fail(4, e.to_string()),
                },
                Classification::Noncanonical => return fail(3, format!("{t} is noncanonical")),
            }
        }
        (Some(rho), Some(basket))
    } else {
        (None, None)
    };
    let general = volume.is_positive();
    let report = MinimalModelReport {
        source: h.clone(),
        alpha,
        permutation: {
            let c = &w.centers[0];
            let mut p = c.local.clone();
            p.extend([c.line.0, c.line.1]);
            p
        },
        centers: w.centers,
        blowups: w.blowups,
        certificates: w.certificates,
        noether_delta: match (general, p_g) {
            (true, Some(p)) => Some(noether_delta(&volume, p)),
            _ => None,
        },
        kodaira_class: if general {
            KodairaClass::GeneralType
        } else {
            KodairaClass::NumericallyZeroVolume
        },
        volume,
        p_g,
        p2,
        chi,
        rho,
        basket,
    };
    debug_assert!(!report.volume.is_negative() && (report.volume.is_zero() != general));
    ConstructionOutcome::Success(Box::new(report))
}

/// `h^0(mK)` as a degree-`m alpha` monomial count, with a flag set when
/// `m >= 3`, where the count is only conjectural.
pub fn plurigenus(report: &MinimalModelReport, m: u64) -> Option<(u64, bool)> {
    let ok = report.blowups.iter().all(|b| m * (b.r() - b.weight_sum()) < b.r());
    if !ok || report.alpha <= 0 {
        return None;
    }
    let v = count_monomials_slice(report.source.weights(), m * report.alpha as u64).to_u64()?;
    Some((v, m >= 3))
}
