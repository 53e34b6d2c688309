use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::PwMap;

/// `S^(n) = S ∪ f⁻¹(S) ∪ ... ∪ f^{-(n-1)}(S)`, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSet<T> {
    pub depth: usize,
    pub points: Vec<T>,
}

impl<T: Scalar> SingularSet<T> {
    pub fn contains(&self, x: &T) -> bool {
        self.position(x).is_ok()
    }

    fn position(&self, x: &T) -> std::result::Result<usize, usize> {
        self.points
            .binary_search_by(|p| p.partial_cmp(x).expect("comparable scalars"))
    }

    /// Components `[s_i, s_{i+1})` of `[0, 1) \ S^(n)`, closed on the left.
    pub fn components(&self) -> Vec<(T, T)> {
        let mut out = Vec::with_capacity(self.points.len());
        for (i, s) in self.points.iter().enumerate() {
            let next = self.points.get(i + 1).cloned().unwrap_or_else(T::one);
            out.push((s.clone(), next));
        }
        out
    }
}

/// Exact preimages `f⁻¹(t)` over every branch.
pub(crate) fn preimages<T: Scalar>(map: &PwMap<T>, target: &T) -> Result<Vec<T>> {
    let lambda = map.lambda();
    let tol = map.tolerance();
    let mut out = Vec::new();
    for br in map.branches() {
        let x = (target.clone() - br.delta.clone()) / lambda.clone();
        if !T::is_exact() && tol > &T::zero() {
            let near_lo = (x.clone() - br.lo.clone()).abs() < *tol;
            let near_hi = (x.clone() - br.hi.clone()).abs() < *tol;
            if near_lo || near_hi {
                return Err(Error::PrecisionLoss(format!(
                    "preimage {x} of {target} is within tolerance of [{}, {})",
                    br.lo, br.hi
                )));
            }
        }
        if br.lo <= x && x < br.hi {
            out.push(x);
        }
    }
    Ok(out)
}

pub(crate) fn singular_points<T: Scalar>(map: &PwMap<T>, n: usize) -> Result<SingularSet<T>> {
    grow(map, n, |_| ())
}

/// `|S^(1)|, ..., |S^(n)|` from a single preimage pass.
pub(crate) fn singular_counts<T: Scalar>(map: &PwMap<T>, n: usize) -> Result<Vec<usize>> {
    let mut counts = Vec::with_capacity(n);
    let set = grow(map, n, |len| counts.push(len))?;
    counts.resize(n, set.points.len());
    Ok(counts)
}

fn grow<T: Scalar>(map: &PwMap<T>, n: usize, mut record: impl FnMut(usize)) -> Result<SingularSet<T>> {
    if n == 0 {
        return Err(Error::InvalidInput("singular set depth must be at least 1".into()));
    }
    let mut set = SingularSet { depth: 1, points: map.singular().to_vec() };
    record(set.points.len());
    let mut frontier = set.points.clone();
    while set.depth < n && !frontier.is_empty() {
        let mut fresh = Vec::new();
        for t in &frontier {
            for x in preimages(map, t)? {
                if let Err(at) = set.position(&x) {
                    set.points.insert(at, x.clone());
                    fresh.push(x);
                }
            }
        }
        frontier = fresh;
        set.depth += 1;
        record(set.points.len());
    }
    // Closure reached early: deeper sets coincide.
    set.depth = n;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use crate::map::{build_map, MapSpec};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn two_branch_map_singular_sets_stabilize() {
        let f = build_map(
            MapSpec::new(vec![q(0, 1), q(1, 2)], vec![q(1, 4), q(-1, 4)], q(1, 2)).unwrap(),
        )
        .unwrap();
        assert_eq!(f.singular_points(1).unwrap().points, vec![q(0, 1), q(1, 2)]);
        assert_eq!(f.singular_points(2).unwrap().points, vec![q(0, 1), q(1, 2)]);
        assert_eq!(f.count_itineraries(1).unwrap(), 2);
        assert_eq!(f.count_itineraries(2).unwrap(), 2);
    }

    #[test]
    fn single_branch_has_only_zero() {
        let f = build_map(MapSpec::new(vec![q(0, 1)], vec![q(1, 4)], q(1, 2)).unwrap()).unwrap();
        for n in 1..6 {
            assert_eq!(f.singular_points(n).unwrap().points, vec![q(0, 1)]);
            assert_eq!(f.count_itineraries(n).unwrap(), 1);
        }
    }

    #[test]
    fn preimages_accumulate() {
        let f = build_map(
            MapSpec::new(vec![q(0, 1), q(2, 5)], vec![q(1, 2), q(1, 7)], q(1, 3)).unwrap(),
        )
        .unwrap();
        let mut prev = f.singular_points(1).unwrap();
        for n in 2..10 {
            let cur = f.singular_points(n).unwrap();
            assert!(prev.points.iter().all(|p| cur.contains(p)));
            prev = cur;
        }
    }

    #[test]
    fn float_preimage_on_an_endpoint_is_precision_loss() {
        let f = build_map(
            MapSpec::new(vec![0.0f64, 0.5], vec![0.25, -0.25], 0.5).unwrap(),
        )
        .unwrap();
        assert!(matches!(f.singular_points(2), Err(crate::Error::PrecisionLoss(_))));
    }
}
