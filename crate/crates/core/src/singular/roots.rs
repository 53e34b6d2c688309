use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

use super::poly::Polynomial;
use super::ConnectionPolynomial;

/// A root enclosure. Exact rational roots carry `exact = Some(r)` and
/// `lo = hi = r`; otherwise the square-free part of the polynomial changes
/// sign strictly between `lo` and `hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBracket {
    pub lo: Rational,
    pub hi: Rational,
    pub exact: Option<Rational>,
}

/// Isolates the roots of `poly` in the open interval `(interval.0, interval.1)`
/// and refines each bracket to width at most `width`.
///
/// Multiple roots are reduced through the square-free part first, and
/// Descartes' rule of signs keeps subdividing until every cell holds at most
/// one root. Rational roots are reported exactly when bisection lands on them
/// or when they are the simplest fraction inside a refined bracket.
pub fn isolate_roots(
    poly: &ConnectionPolynomial<Rational>,
    interval: (Rational, Rational),
    width: &Rational,
) -> Result<Vec<RootBracket>> {
    let p = Polynomial::new(poly.coeffs.clone());
    if p.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    if !width.is_positive() || interval.0 >= interval.1 {
        return Err(Error::InvalidInput("empty interval or non-positive width".into()));
    }
    let sf = p.squarefree();
    let mut out = Vec::new();
    let mut stack = vec![interval];
    while let Some((lo, hi)) = stack.pop() {
        match sf.root_bound(&lo, &hi) {
            0 => {}
            1 => out.push(refine(&sf, lo, hi, width)),
            _ => {
                let mid = (&lo + &hi) / Rational::from_integer(2.into());
                if sf.eval(&mid).is_zero() {
                    out.push(RootBracket { lo: mid.clone(), hi: mid.clone(), exact: Some(mid.clone()) });
                }
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

fn sign(p: &Polynomial<Rational>, x: &Rational) -> i8 {
    let v = p.eval(x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Bisects a cell holding exactly one simple root.
fn refine(p: &Polynomial<Rational>, mut lo: Rational, mut hi: Rational, width: &Rational) -> RootBracket {
    let two = Rational::from_integer(2.into());
    loop {
        let (sl, sh) = (sign(p, &lo), sign(p, &hi));
        if sl != 0 && sh != 0 && &(&hi - &lo) <= width {
            break;
        }
        let mid = (&lo + &hi) / &two;
        let sm = sign(p, &mid);
        if sm == 0 {
            return RootBracket { lo: mid.clone(), hi: mid.clone(), exact: Some(mid) };
        }
        if sl != 0 {
            if sl != sm {
                hi = mid;
            } else {
                lo = mid;
            }
        } else if sh != 0 {
            if sh != sm {
                lo = mid;
            } else {
                hi = mid;
            }
        } else if p.root_bound(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let simple = simplest_between(&lo, &hi);
    if p.eval(&simple).is_zero() {
        return RootBracket { lo: simple.clone(), hi: simple.clone(), exact: Some(simple) };
    }
    RootBracket { lo, hi, exact: None }
}

/// The fraction with smallest denominator in `[lo, hi]` (Stern–Brocot descent).
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if &(fl.clone() + Rational::one()) <= hi {
        return fl + Rational::one();
    }
    // lo and hi share the integer part; recurse on reciprocals of the
    // fractional parts.
    let (a, b) = (lo - &fl, hi - &fl);
    let inner = simplest_between(&b.recip(), &a.recip());
    fl + inner.recip()
}
