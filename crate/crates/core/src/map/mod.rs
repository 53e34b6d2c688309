//! Piecewise λ-affine maps `f(x) = λx + b_i (mod 1)` on a partition of
//! `[0, 1)`, split into branches on which `f` is a single affine piece.

mod itinerary;
mod singular;

pub use itinerary::Itinerary;
pub use singular::SingularSet;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::{Rational, Scalar};

/// Partition `0 = a_0 < a_1 < ... < a_k = 1`, offsets `b_1..b_k` and the
/// common slope `λ ∈ (0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec<T> {
    partition: Vec<T>,
    offsets: Vec<T>,
    lambda: T,
}

impl<T: Scalar> MapSpec<T> {
    /// `a` lists the left endpoints `(0, a_1, ..., a_{k-1})`; the closing
    /// `a_k = 1` may be included or omitted.
    pub fn new(a: Vec<T>, b: Vec<T>, lambda: T) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::InvalidSpec("at least one offset is required".into()));
        }
        let mut partition = a;
        if partition.len() == b.len() {
            partition.push(T::one());
        }
        if partition.len() != b.len() + 1 {
            return Err(Error::InvalidSpec(format!(
                "{} offsets need {} partition points, got {}",
                b.len(),
                b.len(),
                partition.len()
            )));
        }
        if !partition[0].is_zero() || !partition[partition.len() - 1].is_one() {
            return Err(Error::NonMonotonePartition);
        }
        if partition.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonMonotonePartition);
        }
        if !(lambda > T::zero() && lambda < T::one()) {
            return Err(Error::LambdaOutOfRange);
        }
        Ok(Self { partition, offsets: b, lambda })
    }

    /// Number of intervals `k` of the original partition.
    pub fn k(&self) -> usize {
        self.offsets.len()
    }

    /// All partition points `a_0, ..., a_k`.
    pub fn partition(&self) -> &[T] {
        &self.partition
    }

    pub fn offsets(&self) -> &[T] {
        &self.offsets
    }

    pub fn lambda(&self) -> &T {
        &self.lambda
    }

    pub fn with_lambda(&self, lambda: T) -> Result<Self> {
        Self::new(self.partition.clone(), self.offsets.clone(), lambda)
    }

    /// ℤ-independence of `(a_1, ..., a_k)` and `(b_1, ..., b_k)`.
    pub fn is_z_independent(&self) -> Result<bool> {
        is_z_independent(&self.partition[1..], &self.offsets)
    }
}

/// True iff `a_i - b_j` is never an integer. `a` follows the convention
/// `(a_1, ..., a_{k-1}, a_k = 1)`. Integrality is only decided exactly.
pub fn is_z_independent<T: Scalar>(a: &[T], b: &[T]) -> Result<bool> {
    if !T::is_exact() {
        return Err(Error::FloatModeUnsupported);
    }
    Ok(a.iter().all(|ai| {
        b.iter().all(|bj| {
            let d = ai.clone() - bj.clone();
            d.floor_value() != d
        })
    }))
}

/// One affine piece `x ↦ λx + delta` on `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch<T> {
    pub lo: T,
    pub hi: T,
    pub delta: T,
    /// 1-based index `i` of the offset `b_i` this piece comes from.
    pub source_index: usize,
    /// Integer shift `p` with `delta = b_i + p`.
    pub wrap: i64,
}

impl<T: Scalar> Branch<T> {
    pub fn apply(&self, lambda: &T, x: &T) -> T {
        lambda.clone() * x.clone() + self.delta.clone()
    }

    pub fn domain(&self) -> Interval<T> {
        Interval::new(self.lo.clone(), self.hi.clone())
    }
}

/// A piecewise λ-affine map after mod-1 splitting. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct PwMap<T> {
    spec: MapSpec<T>,
    branches: Vec<Branch<T>>,
    singular: Vec<T>,
    tolerance: T,
}

pub type ExactMap = PwMap<Rational>;

/// Builds the mod-1 refinement of `spec`.
pub fn build_map<T: Scalar>(spec: MapSpec<T>) -> Result<PwMap<T>> {
    PwMap::new(spec)
}

impl<T: Scalar> PwMap<T> {
    pub fn new(spec: MapSpec<T>) -> Result<Self> {
        let lambda = spec.lambda.clone();
        let mut branches = Vec::new();
        for (i, b) in spec.offsets.iter().enumerate() {
            let lo = &spec.partition[i];
            let hi = &spec.partition[i + 1];
            let image_lo = lambda.clone() * lo.clone() + b.clone();
            let image_hi = lambda.clone() * hi.clone() + b.clone();
            let first = image_lo.floor_value();
            let mut wrap = -first.to_i64().ok_or_else(|| {
                Error::InvalidSpec(format!("offset {b} is too large"))
            })?;
            let mut start = lo.clone();
            // Crossings of F over the integers m with F(lo) < m < F(hi).
            let mut m = first + T::one();
            while m < image_hi {
                let x = (m.clone() - b.clone()) / lambda.clone();
                if x > start && &x < hi {
                    branches.push(Branch {
                        lo: start,
                        hi: x.clone(),
                        delta: b.clone() + T::from_i64(wrap).expect("wrap"),
                        source_index: i + 1,
                        wrap,
                    });
                    start = x;
                }
                wrap -= 1;
                m = m + T::one();
            }
            branches.push(Branch {
                lo: start,
                hi: hi.clone(),
                delta: b.clone() + T::from_i64(wrap).expect("wrap"),
                source_index: i + 1,
                wrap,
            });
        }

        let tolerance = T::default_tolerance();
        for (j, br) in branches.iter().enumerate() {
            let low = lambda.mul_add_lower(&br.lo, &br.delta);
            let high = lambda.mul_add_upper(&br.hi, &br.delta);
            if low < -tolerance.clone() || high > T::one() + tolerance.clone() {
                return Err(Error::BranchEscapesUnit(j + 1));
            }
        }

        let singular = branches.iter().map(|b| b.lo.clone()).collect();
        Ok(Self { spec, branches, singular, tolerance })
    }

    /// Replaces the float-mode endpoint tolerance (ignored in exact mode).
    pub fn with_tolerance(mut self, tolerance: T) -> Self {
        if !T::is_exact() {
            self.tolerance = tolerance;
        }
        self
    }

    pub fn spec(&self) -> &MapSpec<T> {
        &self.spec
    }

    pub fn lambda(&self) -> &T {
        &self.spec.lambda
    }

    pub fn branches(&self) -> &[Branch<T>] {
        &self.branches
    }

    /// Number of branches `N`.
    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Branch `j`, 1-based.
    pub fn branch(&self, j: usize) -> Result<&Branch<T>> {
        j.checked_sub(1)
            .and_then(|i| self.branches.get(i))
            .ok_or(Error::InvalidBranch { index: j, branches: self.branches.len() })
    }

    /// Singular points `s_0 = 0 < s_1 < ... < s_{N-1}`.
    pub fn singular(&self) -> &[T] {
        &self.singular
    }

    pub fn tolerance(&self) -> &T {
        &self.tolerance
    }

    pub(crate) fn check_domain(&self, x: &T) -> Result<()> {
        if x < &T::zero() || x >= &T::one() {
            return Err(Error::PointOutOfDomain(x.to_string()));
        }
        Ok(())
    }

    /// The 1-based branch `j` with `s_{j-1} <= x < s_j`.
    pub fn branch_index(&self, x: &T) -> Result<usize> {
        self.check_domain(x)?;
        let j = self.singular.partition_point(|s| s <= x);
        if !T::is_exact() && self.tolerance > T::zero() {
            for s in &self.singular[1..] {
                if (x.clone() - s.clone()).abs() < self.tolerance {
                    return Err(Error::PrecisionLoss(format!(
                        "{x} is within tolerance of singular point {s}"
                    )));
                }
            }
        }
        Ok(j)
    }

    pub fn eval(&self, x: &T) -> Result<T> {
        let j = self.branch_index(x)?;
        Ok(self.branches[j - 1].apply(&self.spec.lambda, x))
    }

    /// Applies the affine piece of branch `j` regardless of its domain.
    pub fn apply_branch(&self, j: usize, x: &T) -> Result<T> {
        Ok(self.branch(j)?.apply(&self.spec.lambda, x))
    }

    /// Left limit `f(x⁻)`: the piece whose domain has `x` as right endpoint.
    pub fn eval_left(&self, x: &T) -> Result<T> {
        Ok(self.branch(self.left_branch_index(x)?)?.apply(&self.spec.lambda, x))
    }

    /// Branch used by the left limit at `x ∈ (0, 1]`.
    pub fn left_branch_index(&self, x: &T) -> Result<usize> {
        if x <= &T::zero() || x > &T::one() {
            return Err(Error::PointOutOfDomain(x.to_string()));
        }
        Ok(self.singular.partition_point(|s| s < x))
    }

    /// First `n` branch indices along the orbit of `x`.
    pub fn itinerary_of(&self, x: &T, n: usize) -> Result<Itinerary> {
        let mut entries = Vec::with_capacity(n);
        let mut y = x.clone();
        for _ in 0..n {
            let j = self.branch_index(&y)?;
            entries.push(j);
            y = self.branches[j - 1].apply(&self.spec.lambda, &y);
        }
        Ok(Itinerary::new(entries))
    }

    /// `H_ω(λ)`, the image of 0 under the composition of the pieces along
    /// `omega`, so that `f^n(x) = λ^n x + H_ω(λ)` for `x` with itinerary `ω`.
    pub fn offset_polynomial(&self, omega: &Itinerary) -> Result<T> {
        if omega.is_empty() {
            return Err(Error::EmptyItinerary);
        }
        self.validate(omega)?;
        let lambda = &self.spec.lambda;
        Ok(omega.iter().fold(T::zero(), |h, j| {
            lambda.clone() * h + self.branches[j - 1].delta.clone()
        }))
    }

    pub fn validate(&self, omega: &Itinerary) -> Result<()> {
        match omega.iter().find(|&j| j == 0 || j > self.branches.len()) {
            Some(j) => Err(Error::InvalidBranch { index: j, branches: self.branches.len() }),
            None => Ok(()),
        }
    }

    /// `S^(n)`, the singular points of `f^n`.
    pub fn singular_points(&self, n: usize) -> Result<SingularSet<T>> {
        singular::singular_points(self, n)
    }

    /// `α_n`, the number of order-`n` itineraries.
    pub fn count_itineraries(&self, n: usize) -> Result<usize> {
        Ok(self.singular_points(n)?.points.len())
    }

    /// `α_1, ..., α_n`.
    pub fn itinerary_counts(&self, n: usize) -> Result<Vec<usize>> {
        singular::singular_counts(self, n)
    }

    /// The same map with every parameter rounded into another scalar type.
    pub fn convert<U: Scalar>(&self) -> Result<PwMap<U>>
    where
        T: Scalar,
    {
        let conv = |v: &T| -> Result<U> {
            v.to_rational()
                .map(|r| U::from_rational(&r))
                .ok_or_else(|| Error::InvalidInput(format!("non-finite parameter {v}")))
        };
        let spec = MapSpec::new(
            self.spec.partition.iter().map(conv).collect::<Result<_>>()?,
            self.spec.offsets.iter().map(conv).collect::<Result<_>>()?,
            conv(&self.spec.lambda)?,
        )?;
        PwMap::new(spec)
    }
}
