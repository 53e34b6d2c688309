//! Itinerary growth, sampled ω-limit sets, box counting and λ sweeps.

use std::collections::HashSet;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::map::{build_map, MapSpec, PwMap};
use crate::orbit::{classify_map, iterate_orbit, Budget, UnresolvedReason, Verdict};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyRow {
    pub n: usize,
    pub alpha: usize,
    /// `log(α_n) / n`.
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyProfile {
    pub rows: Vec<EntropyRow>,
}

impl EntropyProfile {
    pub fn alpha(&self, n: usize) -> Option<usize> {
        self.rows.get(n.checked_sub(1)?).map(|r| r.alpha)
    }

    pub fn entropy(&self, n: usize) -> Option<f64> {
        self.rows.get(n.checked_sub(1)?).map(|r| r.entropy)
    }
}

/// `α_n = |S^(n)|` for `n = 1..=n_max`.
pub fn entropy_profile<T: Scalar>(map: &PwMap<T>, n_max: usize) -> Result<EntropyProfile> {
    if n_max < 2 {
        return Err(Error::InvalidInput("entropy profile needs n_max >= 2".into()));
    }
    let rows = map
        .itinerary_counts(n_max)?
        .into_iter()
        .enumerate()
        .map(|(i, alpha)| EntropyRow { n: i + 1, alpha, entropy: (alpha as f64).ln() / (i + 1) as f64 })
        .collect();
    Ok(EntropyProfile { rows })
}

/// Orbit points with indices in `[transient, transient + sample)` over all
/// seeds, sorted and deduplicated.
pub fn omega_limit_sample<T: Scalar>(
    map: &PwMap<T>,
    seeds: &[T],
    transient: usize,
    sample: usize,
) -> Result<Vec<T>> {
    if transient == 0 || sample == 0 {
        return Err(Error::InvalidInput("transient and sample lengths must be positive".into()));
    }
    let mut out = Vec::with_capacity(seeds.len() * sample);
    for seed in seeds {
        let orbit = iterate_orbit(map, seed, transient + sample - 1)?;
        out.extend(orbit.values().into_iter().skip(transient));
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite orbit points"));
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxCountProfile {
    /// `(ε, N(ε))`.
    pub rows: Vec<(f64, usize)>,
    /// Least-squares slope of `log N` against `log(1/ε)` over the finest
    /// two decades of ε.
    pub slope_estimate: f64,
}

/// Box counts on the grid `[mε, (m+1)ε)` anchored at 0.
pub fn box_dimension_estimate(points: &[f64], eps: &[f64]) -> Result<BoxCountProfile> {
    if eps.len() < 2 || eps.windows(2).any(|w| w[1] >= w[0]) || eps.iter().any(|&e| e.is_nan() || e <= 0.0) {
        return Err(Error::InvalidInput("need at least two decreasing positive epsilons".into()));
    }
    if points.is_empty() {
        return Err(Error::DegenerateFit);
    }
    let rows: Vec<(f64, usize)> = eps
        .iter()
        .map(|&e| {
            let boxes: HashSet<i64> = points.iter().map(|x| (x / e).floor() as i64).collect();
            (e, boxes.len())
        })
        .collect();
    let distinct: HashSet<usize> = rows.iter().map(|r| r.1).collect();
    if distinct.len() < 2 {
        return Err(Error::DegenerateFit);
    }
    let finest = eps[eps.len() - 1];
    let mut window: Vec<&(f64, usize)> = rows.iter().filter(|r| r.0 <= 100.0 * finest).collect();
    if window.len() < 2 {
        window = rows[rows.len() - 2..].iter().collect();
    }
    let xs: Vec<f64> = window.iter().map(|r| -r.0.ln()).collect();
    let ys: Vec<f64> = window.iter().map(|r| (r.1 as f64).ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(BoxCountProfile { rows, slope_estimate: sxy / sxx })
}

/// `ε = 2^-lo, ..., 2^-hi`.
pub fn dyadic_ladder(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(-k)).collect()
}

/// `j/m` for every integer `j` with `lo < j/m < hi`.
pub fn rational_grid(m: u64, lo: &Rational, hi: &Rational) -> Vec<Rational> {
    (1..m)
        .map(|j| Rational::new((j as i64).into(), (m as i64).into()))
        .filter(|l| lo < l && l < hi)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: Rational,
    pub verdict: Verdict,
    pub n_cycles: usize,
    pub max_period: usize,
    pub undecided_reason: Option<UnresolvedReason>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Whether `(a, b)` satisfies the ℤ-independence hypothesis.
    pub z_independent: bool,
    pub undecided_fraction: Rational,
}

impl SweepReport {
    pub fn count(&self, verdict: Verdict) -> usize {
        self.rows.iter().filter(|r| r.verdict == verdict).count()
    }
}

/// Classifies `(a, b, λ)` for each λ of the grid, in grid order.
pub fn sweep_lambda(
    a: &[Rational],
    b: &[Rational],
    grid: &[Rational],
    budget: &Budget,
) -> Result<SweepReport> {
    let half = Rational::new(1.into(), 2.into());
    let z_independent = MapSpec::new(a.to_vec(), b.to_vec(), half)?.is_z_independent()?;
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|lambda| {
            let map = build_map(MapSpec::new(a.to_vec(), b.to_vec(), lambda.clone())?)?;
            let c = classify_map(&map, budget)?;
            Ok(SweepRow {
                lambda: lambda.clone(),
                verdict: c.verdict,
                n_cycles: c.cycles.len(),
                max_period: c.budget_used.max_period,
                undecided_reason: c.undecided_reason,
            })
        })
        .collect::<Result<_>>()?;
    let undecided = rows.iter().filter(|r| r.verdict == Verdict::Undecided).count();
    let undecided_fraction = if rows.is_empty() {
        Rational::zero()
    } else {
        Rational::new((undecided as i64).into(), (rows.len() as i64).into())
    };
    Ok(SweepReport { rows, z_independent, undecided_fraction })
}

/// Float value of a rational, for diagnostics.
pub fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::ExactMap;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn map(a: Vec<Rational>, b: Vec<Rational>, l: Rational) -> ExactMap {
        build_map(MapSpec::new(a, b, l).unwrap()).unwrap()
    }

    #[test]
    fn two_branch_entropy_decreases() {
        let f = map(vec![q(0, 1), q(1, 2)], vec![q(1, 4), q(-1, 4)], q(1, 2));
        let p = entropy_profile(&f, 5).unwrap();
        assert!(p.rows.iter().all(|r| r.alpha == 2));
        assert!(p.rows.windows(2).all(|w| w[1].entropy < w[0].entropy));
    }

    #[test]
    fn single_branch_entropy_is_zero() {
        let f = map(vec![q(0, 1)], vec![q(1, 4)], q(1, 2));
        let p = entropy_profile(&f, 6).unwrap();
        assert!(p.rows.iter().all(|r| r.alpha == 1 && r.entropy == 0.0));
    }

    #[test]
    fn rotation_entropy_settles() {
        let f = map(vec![q(0, 1)], vec![q(3, 4)], q(1, 2));
        let p = entropy_profile(&f, 20).unwrap();
        assert_eq!(p.alpha(20), p.alpha(19));
        assert!(p.entropy(20).unwrap() < 0.2);
    }

    #[test]
    fn counts_match_singular_sets() {
        let f = map(vec![q(0, 1), q(1, 3)], vec![q(2, 5), q(3, 7)], q(2, 3));
        let p = entropy_profile(&f, 8).unwrap();
        for row in &p.rows {
            assert_eq!(row.alpha, f.singular_points(row.n).unwrap().points.len());
        }
    }

    #[test]
    fn rotation_limit_sample() {
        let f: PwMap<f64> = map(vec![q(0, 1)], vec![q(3, 4)], q(1, 2)).convert().unwrap();
        let pts = omega_limit_sample(&f, &[0.0, 0.3, 0.9], 30, 10).unwrap();
        let tol = 2.0 * 0.5f64.powi(30);
        for x in pts {
            assert!((x - 1.0 / 6.0).abs() <= tol || (x - 5.0 / 6.0).abs() <= tol, "{x}");
        }
    }

    #[test]
    fn boxes_of_a_cycle_and_a_grid() {
        let pts = [1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0];
        let prof = box_dimension_estimate(&pts, &dyadic_ladder(0, 16)).unwrap();
        assert!(prof.rows.iter().skip(3).all(|r| r.1 == 3));
        assert!(prof.slope_estimate.abs() < 1e-12);

        let grid: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let prof = box_dimension_estimate(&grid, &dyadic_ladder(1, 8)).unwrap();
        assert!((prof.slope_estimate - 1.0).abs() < 0.1, "{}", prof.slope_estimate);
        assert!(prof.rows.windows(2).all(|w| w[0].1 <= w[1].1));
    }

    #[test]
    fn degenerate_and_invalid_fits() {
        assert_eq!(box_dimension_estimate(&[0.5], &[0.1, 0.01]).unwrap_err(), Error::DegenerateFit);
        assert!(matches!(box_dimension_estimate(&[0.5], &[0.1]), Err(Error::InvalidInput(_))));
        assert!(matches!(box_dimension_estimate(&[0.5], &[0.01, 0.1]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn grid_is_open() {
        let g = rational_grid(100, &q(1, 4), &q(1, 1));
        assert_eq!(g.len(), 74);
        assert_eq!(g[0], q(26, 100));
    }

    #[test]
    fn small_sweep_classifies_every_point() {
        let grid = vec![q(1, 4), q(1, 2), q(3, 5)];
        let report = sweep_lambda(&[q(0, 1)], &[q(3, 4)], &grid, &Budget::default()).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.z_independent);
        assert_eq!(report.rows[1].verdict, Verdict::AsymptoticallyPeriodic);
        assert_eq!(report.rows[1].max_period, 2);
    }
}
