//! Scalar types the engine is generic over.
//!
//! Every map, orbit and tongue computation is written against [`Scalar`]. Two
//! families implement it: exact big rationals (the certification mode) and
//! binary floats (`f32`, `f64` and the 106-bit double-double [`HighFloat`]).
//! Mixing modes is ruled out by the type system: a `PwMap<Rational>` cannot
//! be fed a float point.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in canonical reduced form.
pub type Rational = BigRational;

/// Double-double float with a 106-bit significand.
pub type HighFloat = TwoFloat;

/// Arithmetic mode tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    const MODE: Mode;

    /// Nearest representable value (exact for [`Rational`]).
    fn from_rational(r: &Rational) -> Self;

    /// The exact value of `self`; `None` for non-finite floats.
    fn to_rational(&self) -> Option<Rational>;

    /// Largest integer not exceeding `self`.
    fn floor_value(&self) -> Self;

    /// Branch-endpoint comparison tolerance; zero in exact mode.
    fn default_tolerance() -> Self;

    /// A lower bound on the exact value of `self * x + c`.
    fn mul_add_lower(&self, x: &Self, c: &Self) -> Self;

    /// An upper bound on the exact value of `self * x + c`.
    fn mul_add_upper(&self, x: &Self, c: &Self) -> Self;

    /// Text form for artifacts; the shortest round-trip decimal for floats.
    fn render(&self) -> String {
        self.to_string()
    }

    fn is_exact() -> bool {
        Self::MODE == Mode::Exact
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn powi(&self, n: u32) -> Self {
        num_traits::pow(self.clone(), n as usize)
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn floor_value(&self) -> Self {
        self.floor()
    }

    fn default_tolerance() -> Self {
        Rational::zero()
    }

    fn mul_add_lower(&self, x: &Self, c: &Self) -> Self {
        self * x + c
    }

    fn mul_add_upper(&self, x: &Self, c: &Self) -> Self {
        self * x + c
    }
}

macro_rules! impl_native_float {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const MODE: Mode = Mode::Float;

            fn from_rational(r: &Rational) -> Self {
                r.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn to_rational(&self) -> Option<Rational> {
                Rational::from_float(*self)
            }

            fn floor_value(&self) -> Self {
                Float::floor(*self)
            }

            fn default_tolerance() -> Self {
                $tol
            }

            // A fused multiply-add rounds once, so the neighbouring floats
            // bracket the exact result.
            fn mul_add_lower(&self, x: &Self, c: &Self) -> Self {
                self.mul_add(*x, *c).next_down()
            }

            fn mul_add_upper(&self, x: &Self, c: &Self) -> Self {
                self.mul_add(*x, *c).next_up()
            }
        }
    };
}

impl_native_float!(f64, 9.094947017729282e-13); // 2^-40
impl_native_float!(f32, 1.0 / 65536.0);

// Relative slack covering the error of one double-double multiply and add.
const TWOFLOAT_SLACK: f64 = 3.155443620884047e-30; // 2^-98

impl Scalar for TwoFloat {
    const MODE: Mode = Mode::Float;

    fn from_rational(r: &Rational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return TwoFloat::from(hi);
        }
        let rest = r - Rational::from_float(hi).expect("finite");
        let lo = rest.to_f64().unwrap_or(0.0);
        TwoFloat::new_add(hi, lo)
    }

    fn to_rational(&self) -> Option<Rational> {
        let hi = Rational::from_float(self.hi())?;
        let lo = Rational::from_float(self.lo())?;
        Some(hi + lo)
    }

    fn floor_value(&self) -> Self {
        Float::floor(*self)
    }

    /// `hi` alone, or `hi` followed by the signed low word.
    fn render(&self) -> String {
        if self.lo() == 0.0 {
            format!("{}", self.hi())
        } else {
            format!("{}{:+e}", self.hi(), self.lo())
        }
    }

    fn default_tolerance() -> Self {
        TwoFloat::from(9.094947017729282e-13)
    }

    fn mul_add_lower(&self, x: &Self, c: &Self) -> Self {
        let v = *self * *x + *c;
        v - (v.abs() * TWOFLOAT_SLACK + f64::MIN_POSITIVE)
    }

    fn mul_add_upper(&self, x: &Self, c: &Self) -> Self {
        let v = *self * *x + *c;
        v + (v.abs() * TWOFLOAT_SLACK + f64::MIN_POSITIVE)
    }
}

/// Parses `"p/q"`, an integer, or a decimal literal (optionally with an
/// exponent) into an exact rational. Decimals are read as decimal fractions,
/// so `"0.1"` is exactly `1/10`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = || Error::Parse(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| err())?;
        let den: BigInt = d.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().map_err(|_| err())?
    };
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Renders a rational as `num/den`, including integers (`3/1`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Renders a value with `digits` significant decimal digits.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}

/// Largest `f64` that is `<= r`.
pub fn f64_lower(r: &Rational) -> f64 {
    let f = r.to_f64().unwrap_or(f64::NAN);
    match Rational::from_float(f) {
        Some(exact) if &exact > r => f.next_down(),
        _ => f,
    }
}

/// Smallest `f64` that is `>= r`.
pub fn f64_upper(r: &Rational) -> f64 {
    let f = r.to_f64().unwrap_or(f64::NAN);
    match Rational::from_float(f) {
        Some(exact) if &exact < r => f.next_up(),
        _ => f,
    }
}

/// Largest `f64` strictly below `r`.
pub fn f64_below(r: &Rational) -> f64 {
    let f = f64_lower(r);
    match Rational::from_float(f) {
        Some(exact) if &exact == r => f.next_down(),
        _ => f,
    }
}
