use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::map::ExactMap;
use crate::scalar::Rational;
use crate::singular::{detect_connection, Connection};

use super::certify::CertifiedCycle;
use super::tracker::{trace_seed, FloatShadow, SeedOutcome, SeedReport, UnresolvedReason};
use super::Budget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    AsymptoticallyPeriodic,
    SingularConnection,
    Undecided,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::AsymptoticallyPeriodic => "ASYMPTOTICALLY_PERIODIC",
            Verdict::SingularConnection => "SINGULAR_CONNECTION",
            Verdict::Undecided => "UNDECIDED",
        }
    }
}

/// Where the orbit of a singular point ends up; `cycle` indexes
/// [`Classification::cycles`].
#[derive(Debug, Clone, PartialEq)]
pub struct SingularAssignment {
    pub point: Rational,
    pub cycle: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BudgetUsage {
    pub steps: usize,
    pub seeds: usize,
    pub max_period: usize,
    pub depth: usize,
    pub escalations: usize,
    pub unresolved_seeds: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    /// Sorted by smallest orbit point.
    pub cycles: Vec<CertifiedCycle>,
    pub assignment: Vec<SingularAssignment>,
    pub budget_used: BudgetUsage,
    pub connection: Option<Connection<Rational>>,
    /// Why the first unresolved seed stopped, in seed order.
    pub undecided_reason: Option<UnresolvedReason>,
}

struct Harvest {
    cycles: Vec<CertifiedCycle>,
    /// Per seed: the global cycle id it converged to.
    landing: Vec<Result<usize, UnresolvedReason>>,
    seeds: Vec<Rational>,
    usage: BudgetUsage,
}

/// Seeds: `S^(depth)` and the midpoint of every component of `[0,1) ∖ S^(depth)`.
fn seeds(map: &ExactMap, depth: usize) -> Result<Vec<Rational>> {
    let set = map.singular_points(depth)?;
    let mut out = Vec::with_capacity(2 * set.points.len());
    for (lo, hi) in set.components() {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        out.push(lo);
        out.push(mid);
    }
    Ok(out)
}

fn harvest(map: &ExactMap, budget: &Budget) -> Result<Harvest> {
    budget.check()?;
    let shadow = FloatShadow::new(map);
    let seeds = seeds(map, budget.depth)?;
    let reports: Vec<SeedReport> = seeds
        .par_iter()
        .map(|s| trace_seed(map, &shadow, s, budget))
        .collect::<Result<_>>()?;

    let mut cycles: Vec<CertifiedCycle> =
        reports.iter().flat_map(|r| r.cycles.iter().cloned()).collect();
    cycles.sort_by(|a, b| a.point.cmp(&b.point));
    cycles.dedup_by(|a, b| a.point == b.point);

    let mut usage = BudgetUsage { seeds: seeds.len(), depth: budget.depth, ..Default::default() };
    let mut landing = Vec::with_capacity(reports.len());
    for r in &reports {
        usage.steps += r.steps;
        usage.escalations += r.escalations;
        landing.push(match &r.outcome {
            SeedOutcome::Converged { cycle, .. } => {
                let point = &r.cycles[*cycle].point;
                Ok(cycles.binary_search_by(|c| c.point.cmp(point)).expect("merged cycle"))
            }
            SeedOutcome::Unresolved(reason) => {
                usage.unresolved_seeds += 1;
                Err(*reason)
            }
        });
    }
    usage.max_period = cycles.iter().map(|c| c.period).max().unwrap_or(0);
    Ok(Harvest { cycles, landing, seeds, usage })
}

/// Certified cycles shadowed by the orbits of singular points and of
/// representatives of the components of `[0,1) ∖ S^(depth)`, sorted by
/// smallest point. Not a completeness claim.
pub fn find_periodic_orbits(map: &ExactMap, budget: &Budget) -> Result<Vec<CertifiedCycle>> {
    Ok(harvest(map, budget)?.cycles)
}

/// Asymptotic-periodicity verdict.
///
/// `SINGULAR_CONNECTION` when a connection of order at most
/// `connection_depth` exists; otherwise `ASYMPTOTICALLY_PERIODIC` when every
/// seed entered a certified trap, and `UNDECIDED` when some seed did not.
pub fn classify_map(map: &ExactMap, budget: &Budget) -> Result<Classification> {
    let h = harvest(map, budget)?;
    let connection = detect_connection(map, budget.connection_depth)?;

    let assignment = map
        .singular()
        .iter()
        .map(|s| {
            let i = h.seeds.binary_search(s).expect("singular points are seeds");
            SingularAssignment { point: s.clone(), cycle: h.landing[i].ok() }
        })
        .collect();
    let mut undecided_reason = h.landing.iter().find_map(|l| l.err());
    let verdict = if connection.is_some() {
        // unresolved seeds stay visible in `budget_used`
        undecided_reason = None;
        Verdict::SingularConnection
    } else if undecided_reason.is_none() {
        Verdict::AsymptoticallyPeriodic
    } else {
        Verdict::Undecided
    };
    Ok(Classification {
        verdict,
        cycles: h.cycles,
        assignment,
        budget_used: h.usage,
        connection,
        undecided_reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{build_map, MapSpec};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn map(a: Vec<Rational>, b: Vec<Rational>, l: Rational) -> ExactMap {
        build_map(MapSpec::new(a, b, l).unwrap()).unwrap()
    }

    #[test]
    fn rotation_is_asymptotically_periodic() {
        let f = map(vec![q(0, 1)], vec![q(3, 4)], q(1, 2));
        let c = classify_map(&f, &Budget::default()).unwrap();
        assert_eq!(c.verdict, Verdict::AsymptoticallyPeriodic);
        assert_eq!(c.cycles.len(), 1);
        assert_eq!(c.cycles[0].orbit, vec![q(1, 6), q(5, 6)]);
        assert!(c.assignment.iter().all(|a| a.cycle == Some(0)));
        assert_eq!(c.assignment.len(), 2);
    }

    #[test]
    fn two_branch_map_has_a_connection() {
        let f = map(vec![q(0, 1), q(1, 2)], vec![q(1, 4), q(-1, 4)], q(1, 2));
        let c = classify_map(&f, &Budget::default()).unwrap();
        assert_eq!(c.verdict, Verdict::SingularConnection);
        assert!(c.cycles.is_empty());
        assert_eq!(c.connection.unwrap().order, 1);
    }

    #[test]
    fn single_branch_fixed_point() {
        let f = map(vec![q(0, 1)], vec![q(1, 4)], q(1, 2));
        let c = classify_map(&f, &Budget::default()).unwrap();
        assert_eq!(c.verdict, Verdict::AsymptoticallyPeriodic);
        assert_eq!(c.cycles.len(), 1);
        assert_eq!(c.cycles[0].period, 1);
        assert_eq!(c.cycles[0].point, q(1, 2));
    }

    #[test]
    fn two_fixed_points() {
        // Each half maps into itself.
        let f = map(vec![q(0, 1), q(1, 2)], vec![q(1, 8), q(3, 8)], q(1, 2));
        let cycles = find_periodic_orbits(&f, &Budget::default()).unwrap();
        let points: Vec<_> = cycles.iter().map(|c| c.point.clone()).collect();
        assert_eq!(points, vec![q(1, 4), q(3, 4)]);
    }

    #[test]
    fn tiny_budget_is_undecided() {
        let f = map(vec![q(0, 1)], vec![q(3, 4)], q(1, 2));
        let budget = Budget { max_steps: 5, ..Budget::default() };
        let c = classify_map(&f, &budget).unwrap();
        assert_eq!(c.verdict, Verdict::Undecided);
        assert_eq!(c.undecided_reason, Some(UnresolvedReason::StepBudget));
    }
}
