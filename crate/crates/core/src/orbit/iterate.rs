use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::map::{Itinerary, PwMap};
use crate::scalar::Scalar;

/// A forward orbit segment. In exact mode every enclosure is a single point;
/// in float mode the enclosures are outward rounded and rigorous for the
/// float-parameter map.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRecord<T> {
    pub start: T,
    pub points: Vec<Interval<T>>,
    pub itinerary: Itinerary,
    pub wraps: Vec<i64>,
}

impl<T: Scalar> OrbitRecord<T> {
    /// Point estimates (the enclosure midpoints).
    pub fn values(&self) -> Vec<T> {
        self.points
            .iter()
            .map(|iv| if iv.lo == iv.hi { iv.lo.clone() } else { iv.midpoint() })
            .collect()
    }

    pub fn max_width(&self) -> T {
        self.points.iter().map(Interval::width).fold(T::zero(), T::max_of)
    }
}

/// Branch holding the whole closed enclosure, or `PrecisionLoss` when it
/// straddles a singular point.
pub(crate) fn enclosure_branch<T: Scalar>(map: &PwMap<T>, enc: &Interval<T>) -> Result<usize> {
    if enc.lo < T::zero() || enc.lo >= T::one() {
        return Err(Error::PointOutOfDomain(enc.lo.to_string()));
    }
    let singular = map.singular();
    let j = singular.partition_point(|s| s <= &enc.lo);
    let fits = match singular.get(j) {
        Some(next) => &enc.hi < next,
        None => enc.hi < T::one(),
    };
    if !fits {
        return Err(Error::PrecisionLoss(format!(
            "enclosure [{}, {}] straddles a singular point",
            enc.lo, enc.hi
        )));
    }
    Ok(j)
}

/// Iterates `steps` times from `x`, returning `steps + 1` enclosures.
pub fn iterate_orbit<T: Scalar>(map: &PwMap<T>, x: &T, steps: usize) -> Result<OrbitRecord<T>> {
    if steps == 0 {
        return Err(Error::InvalidInput("orbit length must be at least 1".into()));
    }
    map.check_domain(x)?;
    let lambda = map.lambda();
    let mut points = Vec::with_capacity(steps + 1);
    let mut itinerary = Vec::with_capacity(steps);
    let mut wraps = Vec::with_capacity(steps);
    let mut enc = Interval::point(x.clone());
    for _ in 0..steps {
        let j = enclosure_branch(map, &enc)?;
        let br = &map.branches()[j - 1];
        let mut lo = lambda.mul_add_lower(&enc.lo, &br.delta);
        let hi = lambda.mul_add_upper(&enc.hi, &br.delta);
        if lo < T::zero() {
            lo = T::zero();
        }
        itinerary.push(j);
        wraps.push(br.wrap);
        points.push(std::mem::replace(&mut enc, Interval::new(lo, hi)));
    }
    points.push(enc);
    Ok(OrbitRecord { start: x.clone(), points, itinerary: Itinerary::new(itinerary), wraps })
}

/// The maximal half-open interval `[u, v)` of points whose order-`p`
/// itinerary is `omega`, or `None` when no point realizes it.
pub fn maximal_itinerary_interval<T: Scalar>(
    map: &PwMap<T>,
    omega: &Itinerary,
) -> Result<Option<Interval<T>>> {
    if omega.is_empty() {
        return Err(Error::EmptyItinerary);
    }
    map.validate(omega)?;
    let lambda = map.lambda();
    let entries = omega.entries();
    let mut acc = map.branches()[entries[entries.len() - 1] - 1].domain();
    for &j in entries[..entries.len() - 1].iter().rev() {
        let br = &map.branches()[j - 1];
        let pre = Interval::new(
            (acc.lo.clone() - br.delta.clone()) / lambda.clone(),
            (acc.hi.clone() - br.delta.clone()) / lambda.clone(),
        );
        match br.domain().intersect_half_open(&pre) {
            Some(next) => acc = next,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{build_map, MapSpec};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn two_branch() -> PwMap<Rational> {
        build_map(MapSpec::new(vec![q(0, 1), q(1, 2)], vec![q(1, 4), q(-1, 4)], q(1, 2)).unwrap())
            .unwrap()
    }

    fn rotation() -> PwMap<Rational> {
        build_map(MapSpec::new(vec![q(0, 1)], vec![q(3, 4)], q(1, 2)).unwrap()).unwrap()
    }

    #[test]
    fn rotation_orbit_of_zero() {
        let orbit = iterate_orbit(&rotation(), &q(0, 1), 4).unwrap();
        assert_eq!(orbit.values(), vec![q(0, 1), q(3, 4), q(1, 8), q(13, 16), q(5, 32)]);
        assert_eq!(orbit.itinerary.entries(), &[1, 2, 1, 2]);
        assert_eq!(orbit.wraps, vec![0, -1, 0, -1]);
    }

    #[test]
    fn two_branch_orbit_of_zero() {
        let orbit = iterate_orbit(&two_branch(), &q(0, 1), 3).unwrap();
        assert_eq!(orbit.values(), vec![q(0, 1), q(1, 4), q(3, 8), q(7, 16)]);
        assert_eq!(orbit.itinerary.entries(), &[1, 1, 1]);
    }

    #[test]
    fn fixed_point_orbit_is_constant() {
        let f = build_map(MapSpec::new(vec![q(0, 1)], vec![q(1, 4)], q(1, 2)).unwrap()).unwrap();
        let orbit = iterate_orbit(&f, &q(1, 2), 5).unwrap();
        assert!(orbit.values().iter().all(|x| x == &q(1, 2)));
    }

    #[test]
    fn float_enclosures_stay_thin() {
        let f: PwMap<f64> = rotation().convert().unwrap();
        let steps = 2000;
        let orbit = iterate_orbit(&f, &0.1, steps).unwrap();
        // width <= eps / (1 - λ) + initial width · λ^t, initial width 0
        let bound = f64::EPSILON / (1.0 - 0.5);
        for enc in &orbit.points {
            assert!(enc.width() <= bound, "{}", enc.width());
            assert!(enc.lo <= enc.hi);
        }
        assert!((orbit.values()[steps] - 1.0 / 6.0).abs() < 1e-12
            || (orbit.values()[steps] - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn straddling_enclosure_is_precision_loss() {
        let f: PwMap<f64> = two_branch().convert().unwrap();
        // Orbit of 0 is 1/2 - 2^-(t+1); the enclosure eventually touches 1/2.
        assert!(matches!(iterate_orbit(&f, &0.0, 80), Err(Error::PrecisionLoss(_))));
        assert!(iterate_orbit(&f, &0.0, 40).is_ok());
    }

    #[test]
    fn high_float_orbits_go_deeper() {
        let f: PwMap<crate::HighFloat> = two_branch().convert().unwrap();
        assert!(iterate_orbit(&f, &crate::HighFloat::from(0.0), 90).is_ok());
    }

    #[test]
    fn maximal_intervals() {
        let w = |v: Vec<usize>| Itinerary::new(v);
        assert_eq!(
            maximal_itinerary_interval(&two_branch(), &w(vec![1])).unwrap(),
            Some(Interval::new(q(0, 1), q(1, 2)))
        );
        assert_eq!(maximal_itinerary_interval(&two_branch(), &w(vec![1, 2])).unwrap(), None);
        assert_eq!(
            maximal_itinerary_interval(&rotation(), &w(vec![1, 2])).unwrap(),
            Some(Interval::new(q(0, 1), q(1, 2)))
        );
        assert_eq!(
            maximal_itinerary_interval(&rotation(), &w(vec![])).unwrap_err(),
            Error::EmptyItinerary
        );
    }
}
