//! Singular connections at a fixed parameter, connection polynomials in λ,
//! and the finite set of λ where the branch structure changes.

mod poly;
mod roots;

pub use poly::Polynomial;
pub use roots::{isolate_roots, simplest_between, RootBracket};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{Itinerary, MapSpec, PwMap};
use crate::scalar::Scalar;

/// Which one-sided orbit of a partition point produced a connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Orbit of `x⁻`: the first step uses the piece ending at `x`.
    Left,
    Right,
}

/// `y = λ^n x + H_ω(λ)` with `x, y` partition points and `n = |ω|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection<T> {
    pub omega: Itinerary,
    pub x: T,
    pub y: T,
    pub order: usize,
    pub side: Side,
}

impl<T: Scalar> Connection<T> {
    /// Re-evaluates the defining identity.
    pub fn holds(&self, map: &PwMap<T>) -> Result<bool> {
        let h = map.offset_polynomial(&self.omega)?;
        Ok(map.lambda().powi(self.order as u32) * self.x.clone() + h == self.y)
    }
}

/// Searches for a partition point whose forward orbit (right or left
/// limit) lands exactly on a partition point within `depth` steps.
///
/// Orbits advance in lockstep so the lowest order wins; within one order,
/// left-limit orbits come before right orbits and seeds are taken in
/// increasing order.
pub fn detect_connection<T: Scalar>(map: &PwMap<T>, depth: usize) -> Result<Option<Connection<T>>> {
    if !T::is_exact() {
        return Err(Error::FloatModeUnsupported);
    }
    let targets = map.spec().partition();
    let k = targets.len() - 1;

    struct Track<T> {
        x: T,
        side: Side,
        y: T,
        word: Vec<usize>,
        alive: bool,
    }
    let mut tracks: Vec<Track<T>> = targets[1..]
        .iter()
        .map(|a| (a.clone(), Side::Left))
        .chain(targets[..k].iter().map(|a| (a.clone(), Side::Right)))
        .map(|(x, side)| Track { y: x.clone(), x, side, word: Vec::new(), alive: true })
        .collect();

    for n in 1..=depth {
        for track in tracks.iter_mut().filter(|t| t.alive) {
            let j = if n == 1 && track.side == Side::Left {
                map.left_branch_index(&track.y)?
            } else {
                map.branch_index(&track.y)?
            };
            track.y = map.apply_branch(j, &track.y)?;
            track.word.push(j);
            if targets.binary_search_by(|t| t.partial_cmp(&track.y).expect("ordered")).is_ok() {
                return Ok(Some(Connection {
                    omega: Itinerary::new(track.word.clone()),
                    x: track.x.clone(),
                    y: track.y.clone(),
                    order: n,
                    side: track.side,
                }));
            }
            if track.y >= T::one() || track.y < T::zero() {
                track.alive = false;
            }
        }
    }
    Ok(None)
}

/// `Q(λ) = y - (λ^n x + Σ λ^j δ_{i_{n-1-j}})` with coefficients in
/// ascending powers of λ. The offsets are read from `deltas` by 1-based
/// branch index.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionPolynomial<T> {
    pub coeffs: Vec<T>,
    pub omega: Itinerary,
    pub x: T,
    pub y: T,
}

impl<T: Scalar> ConnectionPolynomial<T> {
    pub fn eval(&self, lambda: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * lambda.clone() + c.clone())
    }
}

pub fn connection_polynomial<T: Scalar>(
    omega: &Itinerary,
    x: &T,
    y: &T,
    deltas: &[T],
) -> Result<ConnectionPolynomial<T>> {
    if omega.is_empty() {
        return Err(Error::EmptyItinerary);
    }
    if let Some(j) = omega.iter().find(|&j| j == 0 || j > deltas.len()) {
        return Err(Error::InvalidBranch { index: j, branches: deltas.len() });
    }
    let e = omega.entries();
    let n = e.len();
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(y.clone() - deltas[e[n - 1] - 1].clone());
    for j in 1..n {
        coeffs.push(-deltas[e[n - 1 - j] - 1].clone());
    }
    coeffs.push(-x.clone());
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::IdenticallyZero);
    }
    Ok(ConnectionPolynomial { coeffs, omega: omega.clone(), x: x.clone(), y: y.clone() })
}

/// The λ ∈ (0, 1) where some one-sided value `λ a_j + b_i` at a partition
/// point is an integer: `b_j, b_{j+1}` at interior `a_j` and `b_k` at 1.
pub fn v_set<T: Scalar>(spec: &MapSpec<T>) -> Result<Vec<T>> {
    if !T::is_exact() {
        return Err(Error::FloatModeUnsupported);
    }
    let a = spec.partition();
    let b = spec.offsets();
    let k = b.len();
    let mut out: Vec<T> = Vec::new();
    for j in 1..=k {
        let sides: &[usize] = if j < k { &[j - 1, j] } else { &[k - 1] };
        for &i in sides {
            let (aj, bi) = (&a[j], &b[i]);
            // λ = (m - b_i) / a_j ∈ (0, 1)  ⟺  b_i < m < a_j + b_i
            let mut m = bi.floor_value() + T::one();
            while m < aj.clone() + bi.clone() {
                out.push((m.clone() - bi.clone()) / aj.clone());
                m = m + T::one();
            }
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).expect("ordered"));
    out.dedup();
    Ok(out)
}
