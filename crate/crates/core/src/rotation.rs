//! Contracted rotations `R(x) = λx + b (mod 1)` and their rational tongues.

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::map::{build_map, ExactMap, MapSpec, PwMap};
use crate::orbit::{find_periodic_orbits, Budget};
use crate::scalar::{Rational, Scalar};

/// Parameters in the triangle `0 < 1 - λ < b < 1`; `c = (1 - b)/λ` is the
/// discontinuity.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractedRotationSpec<T> {
    pub lambda: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> ContractedRotationSpec<T> {
    pub fn new(lambda: T, b: T) -> Result<Self> {
        let one = T::one();
        let inside = lambda > T::zero()
            && lambda < one
            && one.clone() - lambda.clone() < b
            && b < one;
        if !inside {
            return Err(Error::ParameterOutsideTriangle);
        }
        let c = (one - b.clone()) / lambda.clone();
        Ok(Self { lambda, b, c })
    }

    pub fn map(&self) -> Result<PwMap<T>> {
        build_map(MapSpec::new(vec![T::zero()], vec![self.b.clone()], self.lambda.clone())?)
    }
}

/// The two-branch map with its split at `c = (1 - b)/λ`.
pub fn contracted_rotation<T: Scalar>(lambda: T, b: T) -> Result<PwMap<T>> {
    ContractedRotationSpec::new(lambda, b)?.map()
}

fn check_fraction(p: u64, q: u64) -> Result<()> {
    if p == 0 || p >= q {
        return Err(Error::BadRange { p, q });
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    Ok(())
}

/// `S(λ, p/q) = 1 + Σ_{k=1}^{q-2} (⌊(k+1)p/q⌋ - ⌊kp/q⌋) λ^k`.
pub fn s_coefficient<T: Scalar>(lambda: &T, p: u64, q: u64) -> Result<T> {
    check_fraction(p, q)?;
    let mut s = T::one();
    let mut power = T::one();
    for k in 1..q.saturating_sub(1) {
        power = power * lambda.clone();
        if (k + 1) * p / q != k * p / q {
            s = s + power.clone();
        }
    }
    Ok(s)
}

/// The closed `b`-interval on which the rotation number is `p/q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tongue<T> {
    pub p: u64,
    pub q: u64,
    pub lambda: T,
    pub b_lo: T,
    pub b_hi: T,
}

impl<T: Scalar> Tongue<T> {
    pub fn contains_interior(&self, b: &T) -> bool {
        &self.b_lo < b && b < &self.b_hi
    }
}

/// `b_lo = (1-λ) S / (1-λ^q)`, `b_hi = (1-λ)(S + λ^{q-1} - λ^q) / (1-λ^q)`.
pub fn tongue_interval<T: Scalar>(lambda: &T, p: u64, q: u64) -> Result<Tongue<T>> {
    if !(lambda > &T::zero() && lambda < &T::one()) {
        return Err(Error::LambdaOutOfRange);
    }
    let s = s_coefficient(lambda, p, q)?;
    let one = T::one();
    let lq1 = lambda.powi(q as u32 - 1);
    let lq = lq1.clone() * lambda.clone();
    let scale = (one.clone() - lambda.clone()) / (one - lq.clone());
    Ok(Tongue {
        p,
        q,
        lambda: lambda.clone(),
        b_lo: scale.clone() * s.clone(),
        b_hi: scale * (s + lq1 - lq),
    })
}

/// Reduced fractions `p/q` with `2 <= q <= q_max`, in increasing order.
fn fractions(q_max: u64) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = (2..=q_max)
        .flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q)))
        .collect();
    out.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    out
}

/// Every tongue with `q <= q_max` at each grid λ, clipped to `1 - λ < b < 1`,
/// sorted by `(λ, p/q)`.
pub fn tongue_atlas<T: Scalar>(q_max: u64, grid: &[T]) -> Result<Vec<Tongue<T>>> {
    if q_max < 2 {
        return Err(Error::InvalidInput("q_max must be at least 2".into()));
    }
    let fracs = fractions(q_max);
    let mut lambdas = grid.to_vec();
    lambdas.sort_by(|a, b| a.partial_cmp(b).expect("ordered grid"));
    lambdas.dedup();
    let rows: Vec<Vec<Tongue<T>>> = lambdas
        .par_iter()
        .map(|lambda| {
            let floor = T::one() - lambda.clone();
            fracs
                .iter()
                .map(|&(p, q)| {
                    let mut t = tongue_interval(lambda, p, q)?;
                    t.b_lo = T::max_of(t.b_lo, floor.clone());
                    t.b_hi = T::min_of(t.b_hi, T::one());
                    Ok(t)
                })
                .filter(|t: &Result<Tongue<T>>| t.as_ref().map_or(true, |t| t.b_lo <= t.b_hi))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// True iff tongues sharing a λ have pairwise disjoint interiors.
pub fn tongues_disjoint<T: Scalar>(tongues: &[Tongue<T>]) -> bool {
    let mut sorted: Vec<&Tongue<T>> = tongues.iter().collect();
    sorted.sort_by(|a, b| {
        a.lambda
            .partial_cmp(&b.lambda)
            .expect("ordered")
            .then(a.b_lo.partial_cmp(&b.b_lo).expect("ordered"))
    });
    sorted
        .windows(2)
        .all(|w| w[0].lambda != w[1].lambda || w[0].b_hi <= w[1].b_lo)
}

#[derive(Debug, Clone, PartialEq)]
pub enum RotationKind {
    /// Backed by a certified cycle with `p` wraps over period `q`.
    Exact { p: u64, q: u64 },
    /// Fraction of the first `steps` iterates of 0 that lie in `[c, 1)`.
    Estimate { value: f64, steps: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationResult {
    pub kind: RotationKind,
    /// The last two Cesàro averages `(n, fraction)` of the estimate.
    pub history: Vec<(usize, f64)>,
}

/// Rotation number: exact when a cycle certifies, otherwise the wrap
/// fraction along the orbit of 0 over `budget.max_steps` steps.
pub fn rotation_number(
    spec: &ContractedRotationSpec<Rational>,
    budget: &Budget,
) -> Result<RotationResult> {
    let map = spec.map()?;
    if let Some(cycle) = find_periodic_orbits(&map, budget)?.first() {
        let (p, q) = (cycle.wraps as u64, cycle.period as u64);
        let g = p.gcd(&q);
        return Ok(RotationResult {
            kind: RotationKind::Exact { p: p / g, q: q / g },
            history: Vec::new(),
        });
    }
    let lambda = spec.lambda.to_f64().unwrap_or(f64::NAN);
    let b = spec.b.to_f64().unwrap_or(f64::NAN);
    let n = budget.max_steps;
    let (mut x, mut wraps) = (0.0f64, 0usize);
    let mut history = Vec::with_capacity(2);
    for t in 1..=n {
        x = lambda.mul_add(x, b);
        if x >= 1.0 {
            x -= 1.0;
            wraps += 1;
        }
        if t == n / 2 || t == n {
            history.push((t, wraps as f64 / t as f64));
        }
    }
    let value = wraps as f64 / n as f64;
    Ok(RotationResult { kind: RotationKind::Estimate { value, steps: n }, history })
}

/// Exact fraction of wrapping steps among `n` iterates of `x`.
pub fn wrap_fraction(map: &ExactMap, x: &Rational, n: usize) -> Result<Rational> {
    let orbit = crate::orbit::iterate_orbit(map, x, n)?;
    let wraps: i64 = orbit.wraps.iter().map(|w| -w).sum();
    Ok(Rational::new(wraps.into(), (n as i64).into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn construction_and_triangle() {
        let f = contracted_rotation(q(1, 2), q(3, 4)).unwrap();
        assert_eq!(f.singular(), &[q(0, 1), q(1, 2)]);
        assert_eq!(f.branches()[0].delta, q(3, 4));
        assert_eq!(f.branches()[1].delta, q(-1, 4));
        assert_eq!(ContractedRotationSpec::new(q(1, 2), q(2, 3)).unwrap().c, q(2, 3));
        assert_eq!(
            contracted_rotation(q(1, 2), q(1, 4)).unwrap_err(),
            Error::ParameterOutsideTriangle
        );
    }

    #[test]
    fn s_coefficients() {
        let l = q(1, 3);
        assert_eq!(s_coefficient(&l, 1, 2).unwrap(), q(1, 1));
        assert_eq!(s_coefficient(&l, 1, 3).unwrap(), q(1, 1));
        assert_eq!(s_coefficient(&l, 2, 3).unwrap(), q(4, 3));
        assert_eq!(s_coefficient(&l, 2, 4).unwrap_err(), Error::NotCoprime { p: 2, q: 4 });
        assert_eq!(s_coefficient(&l, 3, 3).unwrap_err(), Error::BadRange { p: 3, q: 3 });
    }

    #[test]
    fn pinned_tongues() {
        let half = tongue_interval(&q(1, 2), 1, 2).unwrap();
        assert_eq!((half.b_lo, half.b_hi), (q(2, 3), q(5, 6)));
        let third = tongue_interval(&q(1, 2), 1, 3).unwrap();
        assert_eq!((third.b_lo, third.b_hi), (q(4, 7), q(9, 14)));
    }

    #[test]
    fn half_tongue_width() {
        for l in [q(1, 10), q(1, 2), q(7, 9)] {
            let t = tongue_interval(&l, 1, 2).unwrap();
            let one = q(1, 1);
            assert_eq!(&t.b_hi - &t.b_lo, &l * (&one - &l) / (&one + &l));
        }
    }

    #[test]
    fn atlas_rows() {
        let rows = tongue_atlas(2, &[q(1, 2)]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].b_lo.clone(), rows[0].b_hi.clone()), (q(2, 3), q(5, 6)));
        let rows = tongue_atlas(3, &[q(1, 2)]).unwrap();
        let pq: Vec<_> = rows.iter().map(|t| (t.p, t.q)).collect();
        assert_eq!(pq, vec![(1, 3), (1, 2), (2, 3)]);
        assert!(tongues_disjoint(&rows));
        assert!(rows.iter().all(|t| t.b_lo > q(1, 2) && t.b_hi < q(1, 1)));
    }

    #[test]
    fn exact_rotation_numbers() {
        let budget = Budget::default();
        let r = rotation_number(&ContractedRotationSpec::new(q(1, 2), q(3, 4)).unwrap(), &budget)
            .unwrap();
        assert_eq!(r.kind, RotationKind::Exact { p: 1, q: 2 });
        let r = rotation_number(&ContractedRotationSpec::new(q(1, 2), q(3, 5)).unwrap(), &budget)
            .unwrap();
        assert_eq!(r.kind, RotationKind::Exact { p: 1, q: 3 });
    }

    #[test]
    fn estimate_when_nothing_certifies() {
        let budget = Budget { max_steps: 1000, max_period: 4, ..Budget::default() };
        let spec = ContractedRotationSpec::new(q(1, 2), q(51, 100)).unwrap();
        let r = rotation_number(&spec, &budget).unwrap();
        match r.kind {
            RotationKind::Estimate { value, steps } => {
                assert!(value > 0.0 && value < 1.0);
                assert_eq!(steps, 1000);
                assert_eq!(r.history.len(), 2);
            }
            RotationKind::Exact { .. } => panic!("period exceeds the budget"),
        }
    }

    #[test]
    fn wrap_fraction_from_the_cycle() {
        let f = contracted_rotation(q(1, 2), q(3, 4)).unwrap();
        for n in 1..12 {
            let est = wrap_fraction(&f, &q(1, 6), n).unwrap();
            let err = &est - q(1, 2);
            assert!(err <= q(1, n as i64) && -err <= q(1, n as i64));
        }
    }
}
