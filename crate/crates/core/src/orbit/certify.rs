use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::map::{ExactMap, Itinerary};
use crate::scalar::{Rational, Scalar};

use super::iterate::maximal_itinerary_interval;

/// A periodic orbit with its exact point, word and trap interval.
///
/// The trap `J = [u, v)` is the maximal interval realizing `omega`; on it
/// `f^p` is the affine contraction `g(x) = λ^p x + H_ω(λ)` and `g(J) ⊆ J`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedCycle {
    pub period: usize,
    pub omega: Itinerary,
    pub point: Rational,
    pub trap: Interval<Rational>,
    /// `point, f(point), ..., f^{p-1}(point)`.
    pub orbit: Vec<Rational>,
    /// Total integer wraps over one period (`-Σ p_j`).
    pub wraps: i64,
}

impl CertifiedCycle {
    pub fn smallest_point(&self) -> &Rational {
        self.orbit.iter().min().expect("nonempty orbit")
    }

    /// Same cycle started at its smallest point.
    pub fn canonical(&self, map: &ExactMap) -> Result<CertifiedCycle> {
        let (shift, _) = self
            .orbit
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .expect("nonempty orbit");
        if shift == 0 {
            return Ok(self.clone());
        }
        match certify_cycle(map, &self.omega.rotated(shift))? {
            Certificate::Accepted(c) => Ok(c),
            Certificate::Rejected(r) => Err(Error::InvalidInput(format!(
                "rotation of a certified cycle was rejected: {r:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    /// No point has this itinerary.
    Unrealized,
    /// The affine fixed point lies outside the half-open trap.
    FixedPointOutside,
    TrapNotInvariant,
    /// Exact re-iteration disagrees with the word.
    ReiterationMismatch,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Accepted(CertifiedCycle),
    Rejected(Rejection),
}

impl Certificate {
    pub fn accepted(self) -> Option<CertifiedCycle> {
        match self {
            Certificate::Accepted(c) => Some(c),
            Certificate::Rejected(_) => None,
        }
    }
}

/// Certifies the cycle with word `omega`, reduced to its primitive root.
///
/// Accepts iff the maximal interval `J` realizing the word is nonempty, the
/// fixed point `x* = H_ω(λ) / (1 - λ^p)` lies in `[u, v)` and `g(J) ⊆ [u, v]`.
/// An accepted `x*` is a genuine periodic point by right continuity.
pub fn certify_cycle(map: &ExactMap, omega: &Itinerary) -> Result<Certificate> {
    if omega.is_empty() {
        return Err(Error::EmptyItinerary);
    }
    let omega = omega.primitive_root();
    let p = omega.len();
    let lambda = map.lambda();
    let h = map.offset_polynomial(&omega)?;
    let contraction = lambda.powi(p as u32);
    let point = h.clone() / (Rational::one() - contraction.clone());

    let Some(trap) = maximal_itinerary_interval(map, &omega)? else {
        return Ok(Certificate::Rejected(Rejection::Unrealized));
    };
    if !trap.contains_half_open(&point) {
        return Ok(Certificate::Rejected(Rejection::FixedPointOutside));
    }
    let g = |x: &Rational| &contraction * x + &h;
    if g(&trap.lo) < trap.lo || g(&trap.hi) > trap.hi {
        return Ok(Certificate::Rejected(Rejection::TrapNotInvariant));
    }

    let mut orbit = Vec::with_capacity(p);
    let mut wraps = 0i64;
    let mut x = point.clone();
    for j in omega.iter() {
        if map.branch_index(&x)? != j {
            return Ok(Certificate::Rejected(Rejection::ReiterationMismatch));
        }
        let br = map.branch(j)?;
        wraps -= br.wrap;
        orbit.push(x.clone());
        x = br.apply(lambda, &x);
    }
    if x != point {
        return Ok(Certificate::Rejected(Rejection::ReiterationMismatch));
    }
    debug_assert!(!trap.width().is_zero());
    Ok(Certificate::Accepted(CertifiedCycle { period: p, omega, point, trap, orbit, wraps }))
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
    fn rotation_two_cycle() {
        let f = map(vec![q(0, 1)], vec![q(3, 4)], q(1, 2));
        let c = certify_cycle(&f, &Itinerary::new(vec![1, 2])).unwrap().accepted().unwrap();
        assert_eq!(c.point, q(1, 6));
        assert_eq!(c.orbit, vec![q(1, 6), q(5, 6)]);
        assert_eq!(c.trap, Interval::new(q(0, 1), q(1, 2)));
        assert_eq!(c.wraps, 1);
        let rotated = certify_cycle(&f, &Itinerary::new(vec![2, 1])).unwrap().accepted().unwrap();
        assert_eq!(rotated.point, q(5, 6));
        assert_eq!(rotated.canonical(&f).unwrap(), c);
    }

    #[test]
    fn left_periodic_singular_point_is_rejected() {
        let f = map(vec![q(0, 1), q(1, 2)], vec![q(1, 4), q(-1, 4)], q(1, 2));
        assert_eq!(
            certify_cycle(&f, &Itinerary::new(vec![1])).unwrap(),
            Certificate::Rejected(Rejection::FixedPointOutside)
        );
        assert_eq!(
            certify_cycle(&f, &Itinerary::new(vec![1, 2])).unwrap(),
            Certificate::Rejected(Rejection::Unrealized)
        );
    }

    #[test]
    fn global_contraction_fixed_point() {
        let f = map(vec![q(0, 1)], vec![q(1, 4)], q(1, 2));
        let c = certify_cycle(&f, &Itinerary::new(vec![1])).unwrap().accepted().unwrap();
        assert_eq!(c.point, q(1, 2));
        assert_eq!(c.trap, Interval::new(q(0, 1), q(1, 1)));
    }

    #[test]
    fn powers_reduce_to_primitive_period() {
        let f = map(vec![q(0, 1)], vec![q(3, 4)], q(1, 2));
        let c = certify_cycle(&f, &Itinerary::new(vec![1, 2, 1, 2])).unwrap().accepted().unwrap();
        assert_eq!(c.period, 2);
        assert_eq!(c.omega.entries(), &[1, 2]);
    }

    #[test]
    fn empty_word_is_an_error() {
        let f = map(vec![q(0, 1)], vec![q(3, 4)], q(1, 2));
        assert_eq!(certify_cycle(&f, &Itinerary::new(vec![])).unwrap_err(), Error::EmptyItinerary);
    }
}
