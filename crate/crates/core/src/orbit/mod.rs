//! Orbits, certified periodic orbits and asymptotic-periodicity verdicts.

mod bounds;
mod certify;
mod classify;
mod iterate;
mod tracker;

use serde::{Deserialize, Serialize};

pub use bounds::{bound_report, BoundReport};
pub use certify::{certify_cycle, Certificate, CertifiedCycle, Rejection};
pub use classify::{
    classify_map, find_periodic_orbits, BudgetUsage, Classification, SingularAssignment, Verdict,
};
pub use iterate::{iterate_orbit, maximal_itinerary_interval, OrbitRecord};
pub use tracker::{UnresolvedReason, ESCALATION_STEPS, MAX_ESCALATIONS, MAX_REPLAY};

/// Search limits for cycle harvesting and classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Orbit steps per seed.
    pub max_steps: usize,
    /// Longest candidate word.
    pub max_period: usize,
    /// Preimage depth of the seed set `S^(depth)`.
    pub depth: usize,
    /// Orbit length searched for singular connections.
    pub connection_depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_steps: 100_000, max_period: 64, depth: 8, connection_depth: 64 }
    }
}

impl Budget {
    pub fn with_steps(self, max_steps: usize) -> Self {
        Self { max_steps, ..self }
    }

    pub(crate) fn check(&self) -> crate::Result<()> {
        if self.max_steps == 0 || self.max_period == 0 || self.depth == 0 {
            return Err(crate::Error::InvalidInput("budget fields must be positive".into()));
        }
        Ok(())
    }
}
