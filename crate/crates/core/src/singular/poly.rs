use num_traits::{One, Signed, Zero};

use crate::scalar::{Rational, Scalar};

/// Dense univariate polynomial, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_usize(i).expect("index"))
                .collect(),
        )
    }
}

impl Polynomial<Rational> {
    fn monic(&self) -> Self {
        match self.coeffs.last() {
            Some(lead) => Self::new(self.coeffs.iter().map(|c| c / lead).collect()),
            None => self.clone(),
        }
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[d].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(d).max(1)];
        while rem.len() > d && !rem.is_empty() {
            let shift = rem.len() - 1 - d;
            let factor = rem[rem.len() - 1].clone() / &lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &factor * c;
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Same roots, each simple.
    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    /// `P(x + s)`.
    pub fn taylor_shift(&self, s: &Rational) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let add = &c[k + 1] * s;
                c[k] += add;
            }
        }
        Self::new(c)
    }

    /// `P(scale · x)`.
    pub fn scale(&self, scale: &Rational) -> Self {
        let mut factor = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &factor);
            factor *= scale;
        }
        Self::new(out)
    }

    /// `x^n P(1/x)`.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Descartes bound on the number of roots in the open interval `(lo, hi)`.
    pub fn root_bound(&self, lo: &Rational, hi: &Rational) -> usize {
        let n = match self.degree() {
            Some(n) => n,
            None => return 0,
        };
        // Roots in (lo, hi) ↔ roots of P(lo + (hi - lo) t) in (0, 1)
        // ↔ positive roots of (1 + y)^n R(1 / (1 + y)).
        let mut r = self.taylor_shift(lo).scale(&(hi - lo)).coeffs;
        r.resize(n + 1, Rational::zero());
        let moved = Polynomial::new(r.into_iter().rev().collect()).taylor_shift(&Rational::one());
        sign_variations(moved.coeffs())
    }
}

fn sign_variations(coeffs: &[Rational]) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        let positive = c.is_positive();
        if last.is_some_and(|l| l != positive) {
            count += 1;
        }
        last = Some(positive);
    }
    count
}
