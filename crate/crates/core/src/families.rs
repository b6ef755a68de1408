//! Infinite families of numerically-zero-volume 3-folds and the two
//! dimension-raising constructions: padding with `alpha - 1` weights one, and
//! adding a single weight one to a blown-up model.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{qi, Q};
use crate::blowup::{blow_up, volume_after_blowups, BlowUpRecord};
use crate::cyclic::{nabla, CyclicQuotientType};
use crate::error::{Error, Result};
use crate::locus::singular_locus;
use crate::nefness::{check_nefness, CenterSpec, NefnessCertificate, NefnessQuery};
use crate::pipeline::{run_construction, ConstructionOutcome, KodairaClass};
use crate::wps::{
    count_monomials_slice, is_quasismooth_general, is_well_formed_hypersurface, self_intersection,
    WeightedHypersurface,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    /// `X_{6r} ⊂ P(a,b,c,2r,3r)`.
    #[serde(rename = "6r")]
    SixR,
    /// `X_{3r+3k} ⊂ P(a,b,r+k,3k,r)`.
    #[serde(rename = "3r+3k")]
    ThreeRPlusThreeK,
    /// `X_{4r+2k} ⊂ P(a,b,2r+k,2k,r)`.
    #[serde(rename = "4r+2k")]
    FourRPlusTwoK,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCondition {
    pub modulus: u64,
    pub allowed: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    /// Name of the listing the row belongs to, such as `"4r+6"`.
    pub table: String,
    pub no: u32,
    pub kind: FamilyKind,
    pub a: u64,
    pub b: u64,
    /// Third fixed weight, used by the `6r` kind.
    #[serde(default)]
    pub c: Option<u64>,
    /// Shift parameter, used by the other two kinds.
    #[serde(default)]
    pub k: Option<u64>,
    pub b_weight: Vec<u64>,
    pub r_greater_than: u64,
    pub conditions: Vec<ResidueCondition>,
    /// Amplitude as listed, in the form `r-N`.
    pub alpha_listed: String,
}

#[derive(Deserialize)]
struct FamilyFile {
    version: u32,
    families: Vec<FamilySpec>,
}

/// The bundled family listings.
pub const FAMILIES_JSON: &str = include_str!("../data/families.json");

/// Parses a family file; only version 1 is understood.
pub fn load_families(json: &str) -> Result<Vec<FamilySpec>> {
    let f: FamilyFile = serde_json::from_str(json).map_err(|e| Error::Data(e.to_string()))?;
    if f.version != 1 {
        return Err(Error::Data(format!("unsupported family file version {}", f.version)));
    }
    for s in &f.families {
        let param = match s.kind {
            FamilyKind::SixR => s.c,
            _ => s.k,
        };
        if param.is_none() || s.b_weight.len() != 3 {
            return Err(Error::Data(format!("family {} no. {} is incomplete", s.table, s.no)));
        }
    }
    Ok(f.families)
}

pub fn bundled_families() -> Vec<FamilySpec> {
    load_families(FAMILIES_JSON).expect("bundled family data parses")
}

impl FamilySpec {
    pub fn admits(&self, r: u64) -> bool {
        r > self.r_greater_than && self.conditions.iter().all(|c| c.allowed.contains(&(r % c.modulus)))
    }

    /// The `N` in the listed amplitude `r - N`.
    pub fn listed_alpha_offset(&self) -> Option<u64> {
        self.alpha_listed.strip_prefix("r-")?.trim().parse().ok()
    }

    fn third(&self) -> u64 {
        self.c.or(self.k).unwrap_or(0)
    }

    /// `(weights, degree)` for a given `r`, before any condition check.
    pub fn shape(&self, r: u64) -> (Vec<u64>, u64) {
        let (a, b, x) = (self.a, self.b, self.third());
        match self.kind {
            FamilyKind::SixR => (vec![a, b, x, 2 * r, 3 * r], 6 * r),
            FamilyKind::ThreeRPlusThreeK => (vec![a, b, r + x, 3 * x, r], 3 * r + 3 * x),
            FamilyKind::FourRPlusTwoK => (vec![a, b, 2 * r + x, 2 * x, r], 4 * r + 2 * x),
        }
    }
}

/// A family member with its designated center.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub r: u64,
    pub hypersurface: WeightedHypersurface,
    pub center: CenterSpec,
}

/// `None` when `r` violates the family's residue conditions.
pub fn family_instance(spec: &FamilySpec, r: u64) -> Option<FamilyInstance> {
    if !spec.admits(r) {
        return None;
    }
    let (w, d) = spec.shape(r);
    let hypersurface = WeightedHypersurface::new(w, d).ok()?;
    // for every kind the center lies on the line x_0 = x_1 = x_2 = 0: on the
    // edge of weights 2r, 3r for 6r, and at the vertex of weight r otherwise
    let (local, line) = (vec![0, 1, 2], (3, 4));
    let ty = CyclicQuotientType::from_unsigned(r, &spec.b_weight).ok()?;
    Some(FamilyInstance { r, hypersurface, center: CenterSpec { ty, local, line } })
}

/// Runs the construction on a family member and insists on a nef model of
/// volume zero.
pub fn verify_family_member(spec: &FamilySpec, r: u64) -> Result<ConstructionOutcome> {
    let inst = family_instance(spec, r)
        .ok_or_else(|| Error::Precondition(format!("r = {r} violates the conditions of family {} no. {}", spec.table, spec.no)))?;
    let h = &inst.hypersurface;
    if !is_well_formed_hypersurface(h) || !is_quasismooth_general(h) {
        return Err(Error::HypothesisViolated(format!("{h} is not well-formed and quasismooth")));
    }
    let outcome = run_construction(h);
    match outcome.report() {
        None => Err(Error::HypothesisViolated(format!("{h}: {outcome:?}"))),
        Some(rep) if !rep.volume.is_zero() || rep.kodaira_class != KodairaClass::NumericallyZeroVolume => Err(
            Error::HypothesisViolated(format!("{h}: expected volume 0, got {}", crate::arith::fmt_q(&rep.volume))),
        ),
        Some(_) => Ok(outcome),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftClass {
    Terminal,
    Canonical,
    NotGuaranteed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lift {
    pub hypersurface: WeightedHypersurface,
    pub class: LiftClass,
    /// `min (alpha + nabla)` over the singular points, absent for a smooth 3-fold.
    pub min_margin: Option<i64>,
    /// Present when the lift is at worst canonical.
    pub p_g_lower: Option<u64>,
    #[serde(with = "opt_q")]
    pub volume: Option<Q>,
}

mod opt_q {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serializer};

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

/// `X_d ⊂ P(a)` becomes `Y_d ⊂ P(1^{alpha-1}, a)` of dimension `alpha + 2`
/// and amplitude one.
pub fn lift_hypersurface(h3: &WeightedHypersurface) -> Result<Lift> {
    let alpha = h3.amplitude();
    if h3.dim() != 3 {
        return Err(Error::Precondition(format!("{h3} is not a 3-fold")));
    }
    if alpha <= 1 {
        return Err(Error::Precondition(format!("lift needs amplitude at least 2, {h3} has {alpha}")));
    }
    let locus = singular_locus(h3)?;
    if locus.has_non_isolated() {
        return Err(Error::NonIsolated(h3.to_string()));
    }
    let mut min_margin: Option<i64> = None;
    for s in &locus.strata {
        let m = alpha + nabla(&s.ty)?;
        min_margin = Some(min_margin.map_or(m, |x| x.min(m)));
    }
    let class = match min_margin {
        None => LiftClass::Terminal,
        Some(m) if m > 1 => LiftClass::Terminal,
        Some(1) => LiftClass::Canonical,
        Some(_) => LiftClass::NotGuaranteed,
    };
    let mut w = vec![1u64; alpha as usize - 1];
    w.extend_from_slice(h3.weights());
    let y = WeightedHypersurface::new(w, h3.degree)?;
    debug_assert_eq!(y.amplitude(), 1);
    let ok = class != LiftClass::NotGuaranteed;
    Ok(Lift {
        volume: ok.then(|| self_intersection(&y)),
        p_g_lower: ok.then_some(alpha as u64 - 1),
        hypersurface: y,
        class,
        min_margin,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightAdded {
    pub hypersurface: WeightedHypersurface,
    pub center: CenterSpec,
    pub blowup: BlowUpRecord,
    pub certificates: Vec<NefnessCertificate>,
    #[serde(with = "crate::arith::q_string")]
    pub volume: Q,
    /// Numerical Kodaira dimension of the new blown-up model.
    pub nu: usize,
}

/// Adds a leading weight one to a hypersurface whose point `center` passes
/// the nefness criterion, and blows up the new point with weights `(1, e)`.
///
/// `base_nu` is the numerical Kodaira dimension of the blown-up base.
pub fn add_one_weight(h: &WeightedHypersurface, center: &CenterSpec, base_nu: usize) -> Result<WeightAdded> {
    let n = h.dim();
    let a = h.weights();
    let r = center.r();
    let e = center.weights();
    if let Some((l, _)) = center.local.iter().zip(e).find(|(&l, &ei)| a[l] % r != ei) {
        return Err(Error::HypothesisViolated(format!(
            "blow-up weight at x_{l} is not a_{l} mod {r}"
        )));
    }
    let alpha = h.amplitude();
    let slack = (r - e.iter().sum::<u64>()) as i64;
    if alpha < slack {
        return Err(Error::HypothesisViolated(format!("amplitude {alpha} is below r - sum e = {slack}")));
    }
    if slack <= 1 {
        return Err(Error::HypothesisViolated(format!("r - sum e = {slack} is not above 1")));
    }
    let base_nef = (0..n).any(|k| {
        check_nefness(&NefnessQuery::one_point(h.clone(), center.clone(), k)).is_ok_and(|c| c.is_nef())
    });
    if !base_nef {
        return Err(Error::HypothesisViolated(format!("the base {h} fails the nefness criterion at {}", center.ty)));
    }
    let mut w = vec![1u64];
    w.extend_from_slice(a);
    let y = WeightedHypersurface::new(w, h.degree)?;
    let mut new_e = vec![1u64];
    new_e.extend_from_slice(e);
    let mut local = vec![0usize];
    local.extend(center.local.iter().map(|&l| l + 1));
    let new_center = CenterSpec {
        ty: CyclicQuotientType::from_unsigned(r, &new_e)?,
        local,
        line: (center.line.0 + 1, center.line.1 + 1),
    };
    let certificates: Vec<NefnessCertificate> = (0..=n)
        .map(|k| check_nefness(&NefnessQuery::one_point(y.clone(), new_center.clone(), k)))
        .collect::<Result<_>>()?;
    assert!(
        certificates.iter().any(NefnessCertificate::is_nef),
        "adding a weight one preserves the nefness criterion"
    );
    let blowup = blow_up(&new_center.ty)?;
    let kn = self_intersection(&y) * qi(BigInt::from(alpha - 1).pow(n as u32 + 1));
    let volume = volume_after_blowups(&kn, std::slice::from_ref(&blowup), n + 1)?;
    let nu = if base_nu == n - 1 && alpha == slack { n } else { n + 1 };
    debug_assert_eq!(nu == n + 1, !volume.is_zero());
    Ok(WeightAdded { hypersurface: y, center: new_center, blowup, certificates, volume, nu })
}

/// Canonical dimension of an amplitude-one hypersurface, read as
/// `h^0(O(1)) - 1`.
pub fn canonical_dimension_amplitude_one(y: &WeightedHypersurface) -> Option<u64> {
    if y.amplitude() != 1 {
        return None;
    }
    let pg = count_monomials_slice(y.weights(), 1);
    u64::try_from(pg).ok()?.checked_sub(1)
}

/// An amplitude-one model of dimension `alpha + 2` built from a 3-fold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmplitudeOneModel {
    pub hypersurface: WeightedHypersurface,
    /// `true` when the padded hypersurface needed blowing up.
    pub blown_up: bool,
    #[serde(with = "crate::arith::q_string")]
    pub volume: Q,
    pub canonical_dimension: u64,
    /// Volume lower bound for this canonical dimension, when one is known.
    #[serde(with = "opt_q")]
    pub bound: Option<Q>,
}

/// Pads with weights one directly when the lift is at worst canonical, and
/// otherwise adds the weights one at a time, blowing up the noncanonical
/// point at each step.
pub fn amplitude_one_model(h3: &WeightedHypersurface) -> Result<AmplitudeOneModel> {
    let lift = lift_hypersurface(h3)?;
    let (y, volume, blown_up) = match lift.volume {
        Some(v) => (lift.hypersurface, v, false),
        None => {
            let outcome = run_construction(h3);
            let rep = outcome
                .report()
                .ok_or_else(|| Error::HypothesisViolated(format!("{h3}: {outcome:?}")))?;
            if rep.centers.len() != 1 {
                return Err(Error::HypothesisViolated(format!("{h3} needs more than one blow-up")));
            }
            let mut h = h3.clone();
            let mut center = rep.centers[0].clone();
            let mut nu = if rep.volume.is_zero() { 2 } else { 3 };
            let mut volume = rep.volume.clone();
            for _ in 1..h3.amplitude() {
                let step = add_one_weight(&h, &center, nu)?;
                (h, center, nu, volume) = (step.hypersurface, step.center, step.nu, step.volume);
            }
            (h, volume, true)
        }
    };
    let n = y.dim() as u64;
    let canonical_dimension = canonical_dimension_amplitude_one(&y)
        .ok_or_else(|| Error::Precondition(format!("{y} has amplitude {}", y.amplitude())))?;
    let p_g = canonical_dimension + 1;
    let bound = if canonical_dimension + 1 == n {
        Some(crate::bounds::bound_nm1(n, p_g)?)
    } else if canonical_dimension + 2 == n {
        Some(crate::bounds::bound_nm2(n, p_g)?)
    } else {
        None
    };
    Ok(AmplitudeOneModel { hypersurface: y, blown_up, volume, canonical_dimension, bound })
}
