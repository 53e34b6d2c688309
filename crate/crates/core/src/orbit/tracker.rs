//! Long-orbit tracking for exact maps.
//!
//! Orbits run on rigorous `f64` enclosures of the exact dynamics. Near a
//! singular point, where the enclosure cannot decide the branch, the orbit
//! is replayed exactly from its last exact anchor and continued in exact
//! arithmetic until it is clear of the singular points again.

use std::collections::HashSet;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::interval::Interval;
use crate::map::{ExactMap, Itinerary};
use crate::scalar::{f64_below, f64_lower, f64_upper, Rational};

use super::certify::{certify_cycle, CertifiedCycle};
use super::iterate::maximal_itinerary_interval;
use super::Budget;

/// Consecutive exact steps allowed after an ambiguous enclosure.
pub const ESCALATION_STEPS: usize = 200;
/// Longest exact replay from the last anchor.
pub const MAX_REPLAY: usize = 4096;
pub const MAX_ESCALATIONS: usize = 64;
/// Distance from every singular point required before leaving exact mode.
const SAFE_MARGIN: f64 = 9.313225746154785e-10; // 2^-30

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnresolvedReason {
    /// No trap entered within `max_steps`.
    StepBudget,
    /// The orbit stayed within reach of a singular point through the exact
    /// escalation allowance.
    Ambiguous,
    /// Exact replay would exceed [`MAX_REPLAY`] steps.
    ReplayTooLong,
}

impl UnresolvedReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            UnresolvedReason::StepBudget => "step-budget",
            UnresolvedReason::Ambiguous => "ambiguous",
            UnresolvedReason::ReplayTooLong => "replay-too-long",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum SeedOutcome {
    /// Entered the trap of `cycles[cycle]` at `phase` after `entry_step` steps.
    Converged { cycle: usize, phase: usize, entry_step: usize },
    Unresolved(UnresolvedReason),
}

#[derive(Debug, Clone)]
pub(crate) struct SeedReport {
    pub outcome: SeedOutcome,
    pub steps: usize,
    pub escalations: usize,
    /// Canonical cycles certified along this orbit.
    pub cycles: Vec<CertifiedCycle>,
}

/// `f64` view of an exact map with outward-rounded parameters.
pub(crate) struct FloatShadow {
    /// Smallest float `>= s_j`.
    starts: Vec<f64>,
    /// Largest float `< s_j`, indexed like `starts`; `ends[0]` is unused.
    ends: Vec<f64>,
    nearest: Vec<f64>,
    lambda: (f64, f64),
    deltas: Vec<(f64, f64)>,
}

impl FloatShadow {
    pub fn new(map: &ExactMap) -> Self {
        let singular = map.singular();
        Self {
            starts: singular.iter().map(f64_upper).collect(),
            ends: singular.iter().map(f64_below).collect(),
            nearest: singular.iter().map(|s| s.to_f64().unwrap_or(0.0)).collect(),
            lambda: (f64_lower(map.lambda()), f64_upper(map.lambda())),
            deltas: map
                .branches()
                .iter()
                .map(|b| (f64_lower(&b.delta), f64_upper(&b.delta)))
                .collect(),
        }
    }

    /// 1-based branch containing all of `[lo, hi]`, if one is certain.
    #[inline]
    pub fn branch_of(&self, lo: f64, hi: f64) -> Option<usize> {
        if lo.is_nan() || lo < 0.0 {
            return None;
        }
        let j = self.starts.partition_point(|&s| s <= lo);
        let fits = match self.ends.get(j) {
            Some(&end) => hi <= end,
            None => hi < 1.0,
        };
        fits.then_some(j)
    }

    #[inline]
    pub fn step(&self, j: usize, lo: f64, hi: f64) -> (f64, f64) {
        let (dl, dh) = self.deltas[j - 1];
        let nlo = self.lambda.0.mul_add(lo, dl).next_down().max(0.0);
        let nhi = self.lambda.1.mul_add(hi, dh).next_up();
        (nlo, nhi)
    }

    fn clear_of_singular(&self, x: f64) -> bool {
        self.nearest[1..].iter().all(|s| (x - s).abs() > SAFE_MARGIN)
    }
}

/// A certified cycle with traps for every phase.
struct KnownCycle {
    key: Itinerary,
    cycle: CertifiedCycle,
    traps: Vec<Interval<Rational>>,
    shadows: Vec<(f64, f64)>,
}

impl KnownCycle {
    fn new(map: &ExactMap, cycle: CertifiedCycle) -> Result<Self> {
        let mut traps = Vec::with_capacity(cycle.period);
        for phase in 0..cycle.period {
            let trap = maximal_itinerary_interval(map, &cycle.omega.rotated(phase))?
                .expect("phases of a certified cycle are realized");
            traps.push(trap);
        }
        let shadows = traps.iter().map(|t| (f64_upper(&t.lo), f64_below(&t.hi))).collect();
        Ok(Self { key: cycle.omega.least_rotation(), cycle, traps, shadows })
    }
}

enum Position {
    Exact(Rational),
    Float(f64, f64),
}

/// Smallest `p <= max_period` such that the last `2p + 8` symbols are
/// `p`-periodic.
pub(crate) fn tail_period(itin: &[usize], max_period: usize) -> Option<usize> {
    let n = itin.len();
    for p in 1..=max_period {
        let window = 2 * p + 8;
        if n < window {
            return None;
        }
        if (n - window + p..n).rev().all(|i| itin[i] == itin[i - p]) {
            return Some(p);
        }
    }
    None
}

pub(crate) fn trace_seed(
    map: &ExactMap,
    shadow: &FloatShadow,
    seed: &Rational,
    budget: &Budget,
) -> Result<SeedReport> {
    let mut itin: Vec<usize> = Vec::new();
    let mut position = Position::Exact(seed.clone());
    let mut anchor = (0usize, seed.clone());
    let mut exact_left = ESCALATION_STEPS;
    let mut escalations = 0usize;
    let mut tried: HashSet<Itinerary> = HashSet::new();
    let mut known: Vec<KnownCycle> = Vec::new();
    let mut t = 0usize;

    let finish = |outcome, steps, escalations, known: Vec<KnownCycle>| SeedReport {
        outcome,
        steps,
        escalations,
        cycles: known.into_iter().map(|k| k.cycle).collect(),
    };

    loop {
        if let Some((cycle, phase)) = locate(&position, &known) {
            let outcome = SeedOutcome::Converged { cycle, phase, entry_step: t };
            return Ok(finish(outcome, t, escalations, known));
        }
        if t >= budget.max_steps {
            let outcome = SeedOutcome::Unresolved(UnresolvedReason::StepBudget);
            return Ok(finish(outcome, t, escalations, known));
        }

        let j = match &mut position {
            Position::Exact(x) => {
                let approx = x.to_f64().unwrap_or(0.0);
                if shadow.clear_of_singular(approx) {
                    let (lo, hi) = (f64_lower(x), f64_upper(x));
                    if shadow.branch_of(lo, hi).is_some() {
                        anchor = (t, x.clone());
                        position = Position::Float(lo, hi);
                        continue;
                    }
                }
                if exact_left == 0 {
                    let outcome = SeedOutcome::Unresolved(UnresolvedReason::Ambiguous);
                    return Ok(finish(outcome, t, escalations, known));
                }
                exact_left -= 1;
                let j = map.branch_index(x)?;
                *x = map.apply_branch(j, x)?;
                j
            }
            Position::Float(lo, hi) => match shadow.branch_of(*lo, *hi) {
                Some(j) => {
                    (*lo, *hi) = shadow.step(j, *lo, *hi);
                    j
                }
                None => {
                    escalations += 1;
                    let reason = if escalations > MAX_ESCALATIONS {
                        Some(UnresolvedReason::Ambiguous)
                    } else if t - anchor.0 > MAX_REPLAY {
                        Some(UnresolvedReason::ReplayTooLong)
                    } else {
                        None
                    };
                    if let Some(reason) = reason {
                        let outcome = SeedOutcome::Unresolved(reason);
                        return Ok(finish(outcome, t, escalations, known));
                    }
                    let mut x = anchor.1.clone();
                    for &j in &itin[anchor.0..t] {
                        x = map.apply_branch(j, &x)?;
                    }
                    position = Position::Exact(x);
                    exact_left = ESCALATION_STEPS;
                    continue;
                }
            },
        };
        itin.push(j);
        t += 1;

        if let Some(p) = tail_period(&itin, budget.max_period) {
            let key = Itinerary::new(itin[itin.len() - p..].to_vec()).least_rotation();
            if !known.iter().any(|k| k.key == key) && tried.insert(key.clone()) {
                if let Some(cycle) = certify_cycle(map, &key)?.accepted() {
                    known.push(KnownCycle::new(map, cycle.canonical(map)?)?);
                }
            }
        }
    }
}

fn locate(position: &Position, known: &[KnownCycle]) -> Option<(usize, usize)> {
    for (ci, k) in known.iter().enumerate() {
        let hit = match position {
            Position::Exact(x) => k.traps.iter().position(|trap| trap.contains_half_open(x)),
            Position::Float(lo, hi) => {
                k.shadows.iter().position(|&(start, end)| *lo >= start && *hi <= end)
            }
        };
        if let Some(phase) = hit {
            return Some((ci, phase));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{build_map, MapSpec};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn tail_period_finds_smallest_period() {
        let mut v = vec![1, 1, 2, 2, 2];
        v.extend([1, 2].repeat(10));
        assert_eq!(tail_period(&v, 8), Some(2));
        assert_eq!(tail_period(&[1, 2, 1], 8), None);
        assert_eq!(tail_period(&[1; 12], 8), Some(1));
    }

    #[test]
    fn shadow_is_conservative_at_singular_points() {
        let f = build_map(MapSpec::new(vec![q(0, 1), q(1, 3)], vec![q(1, 5), q(1, 7)], q(1, 2)).unwrap())
            .unwrap();
        let shadow = FloatShadow::new(&f);
        let third = q(1, 3);
        assert_eq!(shadow.branch_of(f64_lower(&third), f64_upper(&third)), None);
        assert_eq!(shadow.branch_of(0.2, 0.3), Some(1));
        assert_eq!(shadow.branch_of(0.5, 0.6), Some(2));
    }

    #[test]
    fn rotation_seed_converges() {
        let f = build_map(MapSpec::new(vec![q(0, 1)], vec![q(3, 4)], q(1, 2)).unwrap()).unwrap();
        let shadow = FloatShadow::new(&f);
        let report = trace_seed(&f, &shadow, &q(0, 1), &Budget::default()).unwrap();
        assert!(matches!(report.outcome, SeedOutcome::Converged { cycle: 0, .. }));
        assert_eq!(report.cycles[0].orbit, vec![q(1, 6), q(5, 6)]);
    }

    #[test]
    fn two_branch_seed_is_unresolved() {
        let f = build_map(
            MapSpec::new(vec![q(0, 1), q(1, 2)], vec![q(1, 4), q(-1, 4)], q(1, 2)).unwrap(),
        )
        .unwrap();
        let shadow = FloatShadow::new(&f);
        let report = trace_seed(&f, &shadow, &q(0, 1), &Budget::default()).unwrap();
        assert_eq!(report.outcome, SeedOutcome::Unresolved(UnresolvedReason::Ambiguous));
        assert!(report.cycles.is_empty());
        assert!(report.escalations >= 1);
    }
}
