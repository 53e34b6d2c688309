use crate::scalar::Scalar;

/// A pair of endpoints. Whether the right end is included depends on use:
/// branch domains and trap intervals are half-open `[lo, hi)`, orbit
/// enclosures are closed `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Self { lo, hi }
    }

    pub fn point(x: T) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> T {
        (self.lo.clone() + self.hi.clone()) / T::from_u8(2).expect("2")
    }

    /// Membership in the half-open reading `[lo, hi)`.
    pub fn contains_half_open(&self, x: &T) -> bool {
        &self.lo <= x && x < &self.hi
    }

    /// Membership in the closed reading `[lo, hi]`.
    pub fn contains_closed(&self, x: &T) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Intersection of two half-open intervals, `None` when empty.
    pub fn intersect_half_open(&self, other: &Self) -> Option<Self> {
        let lo = T::max_of(self.lo.clone(), other.lo.clone());
        let hi = T::min_of(self.hi.clone(), other.hi.clone());
        (lo < hi).then(|| Self { lo, hi })
    }
}
