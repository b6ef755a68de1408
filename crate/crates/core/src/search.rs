//! Exhaustive search over degrees and sorted weight 5-tuples.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{run_construction, ConstructionOutcome, MinimalModelReport};
use crate::wps::WeightedHypersurface;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchRange {
    pub alpha_min: i64,
    pub alpha_max: i64,
    pub d_min: u64,
    pub d_max: u64,
    pub weight_max: u64,
}

impl Default for SearchRange {
    fn default() -> Self {
        SearchRange { alpha_min: 1, alpha_max: 10, d_min: 10, d_max: 100, weight_max: 60 }
    }
}

impl SearchRange {
    pub fn validate(&self) -> Result<()> {
        let positive = self.alpha_min > 0 && self.d_min > 0 && self.weight_max > 0;
        if !positive || self.alpha_min > self.alpha_max || self.d_min > self.d_max {
            return Err(Error::Precondition(format!("invalid search range {self:?}")));
        }
        Ok(())
    }

    /// Every `(weights, d)` in the range with weights sorted ascending.
    pub fn candidates(&self) -> Vec<(Vec<u64>, u64)> {
        let mut out = Vec::new();
        let mut w = [0u64; 5];
        self.fill(&mut w, 0, 1, 0, &mut out);
        out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        out
    }

    fn fill(&self, w: &mut [u64; 5], i: usize, min: u64, sum: u64, out: &mut Vec<(Vec<u64>, u64)>) {
        let budget = self.d_max.saturating_sub(self.alpha_min as u64);
        if i == 5 {
            let lo = self.d_min.max(sum + self.alpha_min as u64);
            let hi = self.d_max.min(sum + self.alpha_max as u64);
            for d in lo..=hi {
                out.push((w.to_vec(), d));
            }
            return;
        }
        let left = (5 - i) as u64;
        let mut a = min;
        while a <= self.weight_max && sum + a * left <= budget {
            w[i] = a;
            self.fill(w, i + 1, a, sum + a, out);
            a += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Successful constructions ordered by degree, then weights.
    pub successes: Vec<MinimalModelReport>,
    /// Candidates per outcome, keyed `"success"` or `"step N"`.
    pub outcome_counts: BTreeMap<String, usize>,
}

fn key(o: &ConstructionOutcome) -> String {
    match o {
        ConstructionOutcome::Success(_) => "success".into(),
        ConstructionOutcome::Failure { stage, .. } => format!("step {stage}"),
    }
}

/// Runs the construction on every candidate, on `jobs` threads (all cores
/// when `None`). The result does not depend on the thread count.
pub fn search(range: &SearchRange, jobs: Option<usize>) -> Result<SearchResult> {
    range.validate()?;
    let cands = range.candidates();
    let work = || -> Vec<ConstructionOutcome> {
        cands
            .par_iter()
            .map(|(w, d)| match WeightedHypersurface::new(w.clone(), *d) {
                Ok(h) => run_construction(&h),
                Err(e) => ConstructionOutcome::Failure { stage: 0, reason: e.to_string() },
            })
            .collect()
    };
    let outcomes = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut outcome_counts = BTreeMap::new();
    let mut successes = Vec::new();
    for o in outcomes {
        *outcome_counts.entry(key(&o)).or_insert(0) += 1;
        if let ConstructionOutcome::Success(r) = o {
            successes.push(*r);
        }
    }
    Ok(SearchResult { successes, outcome_counts })
}
