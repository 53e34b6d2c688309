use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::ExactMap;

use super::classify::Classification;

/// Orbit-count bounds for one classified map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Intervals of the original partition.
    pub k: usize,
    /// Discontinuities of the split map, `N - 1`.
    pub n_disc: usize,
    /// Discontinuities mapped to 0.
    pub ell: usize,
    /// Classes of singular points with a common limit cycle; `None` unless
    /// every singular orbit was resolved.
    pub n_classes: Option<usize>,
    pub n_cycles: usize,
    /// `n_disc + 1 - ell`.
    pub theorem_bound: usize,
}

impl BoundReport {
    pub fn bound(&self) -> usize {
        self.theorem_bound.min(self.k)
    }
}

/// Checks `n_cycles <= min(n_disc + 1 - ell, k)`; a violation is an
/// implementation error.
pub fn bound_report(map: &ExactMap, classification: &Classification) -> Result<BoundReport> {
    let singular = map.singular();
    let mut ell = 0;
    for s in &singular[1..] {
        if map.eval(s)?.is_zero() {
            ell += 1;
        }
    }
    let n_disc = singular.len() - 1;
    let n_classes = classification
        .assignment
        .iter()
        .map(|a| a.cycle)
        .collect::<Option<BTreeSet<_>>>()
        .map(|set| set.len());
    let report = BoundReport {
        k: map.spec().k(),
        n_disc,
        ell,
        n_classes,
        n_cycles: classification.cycles.len(),
        theorem_bound: n_disc + 1 - ell,
    };
    if report.n_cycles > report.bound() {
        return Err(Error::BoundViolation(format!(
            "{} certified cycles exceed min({}, {})",
            report.n_cycles, report.theorem_bound, report.k
        )));
    }
    Ok(report)
}
