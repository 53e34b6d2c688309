use std::fmt;

use serde::{Deserialize, Serialize};

/// Finite sequence of 1-based branch indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Itinerary(Vec<usize>);

impl Itinerary {
    pub fn new(entries: Vec<usize>) -> Self {
        Self(entries)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// The word shifted left by `k` positions.
    pub fn rotated(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Self(v)
    }

    /// Shortest `u` with `self = u^m`.
    pub fn primitive_root(&self) -> Self {
        let n = self.0.len();
        for p in 1..=n {
            if n.is_multiple_of(p) && (p..n).all(|i| self.0[i] == self.0[i - p]) {
                return Self(self.0[..p].to_vec());
            }
        }
        self.clone()
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive_root().len() == self.len()
    }

    /// Lexicographically least rotation; a key for cyclic words.
    pub fn least_rotation(&self) -> Self {
        (0..self.len().max(1))
            .map(|k| self.rotated(k))
            .min()
            .unwrap_or_default()
    }
}

impl From<Vec<usize>> for Itinerary {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_roots() {
        assert_eq!(Itinerary::new(vec![1, 2, 1, 2]).primitive_root().entries(), &[1, 2]);
        assert_eq!(Itinerary::new(vec![1, 1, 1]).primitive_root().entries(), &[1]);
        assert!(Itinerary::new(vec![1, 1, 2]).is_primitive());
    }

    #[test]
    fn rotations() {
        let w = Itinerary::new(vec![2, 1, 1]);
        assert_eq!(w.rotated(1).entries(), &[1, 1, 2]);
        assert_eq!(w.least_rotation().entries(), &[1, 1, 2]);
        assert_eq!(w.to_string(), "(2,1,1)");
    }
}
