//! Weighted blow-ups of cyclic quotient points.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_all, units, Q};
use crate::cyclic::CyclicQuotientType;
use crate::error::{Error, Result};
use crate::wps::{is_well_formed_space, Weights};

/// Blow-up of `1/r(e_1..e_n)` with weights `(e_1..e_n)`; the exceptional
/// divisor is `P(e_1..e_n)` and chart `i` has type `1/e_i(-e_1,..,r,..,-e_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpRecord {
    pub center: CyclicQuotientType,
    pub weights: Vec<u64>,
    /// `(r - sum e_i) / r`, the coefficient of `E` in `K_Y - pi^* K_X`.
    #[serde(with = "crate::arith::q_string")]
    pub discrepancy_coeff: Q,
    pub charts: Vec<CyclicQuotientType>,
    pub exceptional_weights: Weights,
}

impl BlowUpRecord {
    pub fn r(&self) -> u64 {
        self.center.r()
    }

    pub fn weight_sum(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// `(r - sum e)^n / (r prod e)`, subtracted from `K^n` by this blow-up.
    pub fn volume_correction(&self) -> Q {
        let n = self.weights.len() as u32;
        let r = BigInt::from(self.r());
        let num = (r.clone() - BigInt::from(self.weight_sum())).pow(n);
        let prod: BigInt = self.weights.iter().map(|&e| BigInt::from(e)).product();
        Q::new(num, r * prod)
    }
}

/// Blow-up with weights equal to the center's stored residues.
pub fn blow_up(center: &CyclicQuotientType) -> Result<BlowUpRecord> {
    blow_up_with(center, None, false)
}

/// Blow-up with optional explicit weights.
///
/// Explicit weights must agree with a unit multiple of the residues mod `r`,
/// so they describe the same point in a different presentation.
pub fn blow_up_with(
    center: &CyclicQuotientType,
    weights: Option<&[u64]>,
    require_positive_discrepancy: bool,
) -> Result<BlowUpRecord> {
    let r = center.r();
    let e: Vec<u64> = match weights {
        None => center.residues().to_vec(),
        Some(w) => {
            if w.len() != center.dim() {
                return Err(Error::Precondition(format!("{} weights for {center}", w.len())));
            }
            let same_point = units(r)
                .into_iter()
                .any(|u| w.iter().zip(center.residues()).all(|(&x, &a)| x % r == a * u % r));
            if !same_point {
                return Err(Error::Precondition(format!("weights {w:?} do not present {center}")));
            }
            w.to_vec()
        }
    };
    if e.contains(&0) {
        return Err(Error::ZeroResidue(format!("blow-up weights of {center}")));
    }
    if gcd_all(e.iter().copied()) != 1 {
        return Err(Error::Precondition(format!("blow-up weights {e:?} have a common factor")));
    }
    let sum: u64 = e.iter().sum();
    if require_positive_discrepancy && sum >= r {
        return Err(Error::Precondition(format!("sum of weights {sum} >= r = {r}")));
    }
    let charts = (0..e.len())
        .map(|i| {
            if e[i] == 1 {
                return Ok(CyclicQuotientType::smooth(e.len()));
            }
            let res: Vec<i64> = (0..e.len())
                .map(|j| if j == i { r as i64 } else { -(e[j] as i64) })
                .collect();
            CyclicQuotientType::new(e[i], &res)
        })
        .collect::<Result<Vec<_>>>()?;
    let exceptional_weights = if e.len() >= 3 {
        Weights::new(e.clone())?
    } else {
        return Err(Error::InvalidType(format!("blow-up of {center} needs dimension >= 3")));
    };
    Ok(BlowUpRecord {
        center: center.clone(),
        discrepancy_coeff: Q::new(BigInt::from(r as i64 - sum as i64), BigInt::from(r)),
        weights: e,
        charts,
        exceptional_weights,
    })
}

pub fn exceptional_well_formed(weights: &Weights) -> bool {
    is_well_formed_space(weights)
}

/// `K^n` after the listed blow-ups at distinct points.
pub fn volume_after_blowups(kn_before: &Q, records: &[BlowUpRecord], n: usize) -> Result<Q> {
    let mut v = kn_before.clone();
    for rec in records {
        if rec.weights.len() != n {
            return Err(Error::Precondition(format!(
                "blow-up of {} is {}-dimensional, expected {n}",
                rec.center,
                rec.weights.len()
            )));
        }
        if !exceptional_well_formed(&rec.exceptional_weights) {
            return Err(Error::IllFormedExceptional(rec.exceptional_weights.to_string()));
        }
        v -= rec.volume_correction();
    }
    Ok(v)
}
