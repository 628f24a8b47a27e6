//! Exact rational arithmetic and univariate polynomials in `k`.
//!
//! Hilbert polynomials are built out of binomial polynomials `C(k + o, n)`
//! with rational coefficients. Evaluation at negative arguments follows the
//! falling-factorial convention, so `C(x, n) = x(x-1)…(x-n+1)/n!` for every
//! integer `x`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("domain error: {0}")]
    Domain(String),
}

/// Shorthand for an integral rational.
pub fn rat(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `p / q` as an exact rational. Panics if `q == 0`.
pub fn ratio(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Rational {
    Rational::new(p.into(), q.into())
}

/// Polynomial in one variable with exact rational coefficients.
///
/// `coeffs[i]` is the coefficient of `k^i`. Trailing zeros are trimmed, so the
/// zero polynomial has no coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `k + c`.
    pub fn linear_shift(c: Rational) -> Self {
        Self::new(vec![c, Rational::one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `k^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&rat(x))
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn add(self, rhs: Self) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn sub(self, rhs: Self) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn neg(self) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: Self) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::new(out)
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalPolynomial {
            type Output = RationalPolynomial;
            fn $m(self, rhs: Self) -> RationalPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        -&self
    }
}

impl fmt::Display for RationalPolynomial {
    /// Renders highest power first, e.g. `1/6k^3 + k^2 + 11/6k + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "k")?,
                _ => write!(f, "k^{i}")?,
            }
        }
        Ok(())
    }
}

/// `C(k + offset, n)` expanded as a polynomial in `k`.
///
/// Returns `∏_{i=0}^{n-1} (k + offset - i) / n!`; the constant `1` when
/// `n = 0`.
pub fn binomial_poly(offset: i64, n: u32) -> RationalPolynomial {
    let mut acc = RationalPolynomial::constant(Rational::one());
    let mut factorial = BigInt::one();
    for i in 0..n {
        acc = &acc * &RationalPolynomial::linear_shift(rat(offset - i64::from(i)));
        factorial *= BigInt::from(i + 1);
    }
    acc.scale(&Rational::new(BigInt::one(), factorial))
}

/// Exact `⌊a / (b + √c)⌋`.
///
/// Decided purely by integer comparisons: `q(b + √c) ≤ a` is rewritten as
/// `a - qb ≥ q√c` and settled by sign analysis plus squaring. An integer
/// square root only seeds the search.
pub fn floor_sqrt_expr(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<BigInt, ExactError> {
    if c.is_negative() {
        return Err(ExactError::Domain(format!("negative radicand {c}")));
    }
    if !denominator_positive(b, c) {
        return Err(ExactError::Domain(format!(
            "denominator {b} + sqrt({c}) is not positive"
        )));
    }

    // q(b + √c) ≤ a, monotone: true for all q up to the answer, false after.
    let fits = |q: &BigInt| -> bool {
        let p = a - q * b;
        let rhs_sq = q * q * c;
        if q.is_negative() {
            !p.is_negative() || &p * &p <= rhs_sq
        } else {
            !p.is_negative() && &p * &p >= rhs_sq
        }
    };

    // b + ⌊√c⌋ + 1 > b + √c > 0, so the seed divisor is a positive integer.
    let seed_den = b + c.sqrt() + BigInt::one();
    let seed = a.div_floor(&seed_den);

    let (mut lo, mut hi) = if fits(&seed) {
        // Gallop upward until the predicate breaks.
        let mut step = BigInt::one();
        let mut lo = seed.clone();
        loop {
            let probe = &lo + &step;
            if fits(&probe) {
                lo = probe;
                step *= 2;
            } else {
                break (lo, probe);
            }
        }
    } else {
        let mut step = BigInt::one();
        let mut hi = seed.clone();
        loop {
            let probe = &hi - &step;
            if fits(&probe) {
                break (probe, hi);
            }
            hi = probe;
            step *= 2;
        }
    };
    // Invariant: fits(lo) && !fits(hi).
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        if fits(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn denominator_positive(b: &BigInt, c: &BigInt) -> bool {
    if b.is_positive() {
        true
    } else if b.is_zero() {
        c.is_positive()
    } else {
        c > &(b * b)
    }
}

/// Serializes a rational as the string `"p/q"` (or `"n"` when integral).
pub fn serialize_rational<S: serde::Serializer>(q: &Rational, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_str(q)
}

pub fn serialize_opt_rational<S: serde::Serializer>(
    q: &Option<Rational>,
    ser: S,
) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => ser.collect_str(q),
        None => ser.serialize_none(),
    }
}

/// Exact integer value of a rational, if it has one.
pub fn to_integer(q: &Rational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

/// Non-authoritative decimal rendering with a fixed number of digits.
pub fn approx_decimal(q: &Rational, digits: usize) -> String {
    // Round half away from zero at the last digit.
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = q * Rational::from_integer(scale.clone());
    let neg = scaled.is_negative();
    let mag = scaled.abs();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let rounded = (mag + half).floor().to_integer();
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if neg && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_string();
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// `√q` truncated to `digits` decimal places, for `q ≥ 0`.
///
/// Computed as `⌊√(q·10^{2·digits})⌋` in integers, so every printed digit is
/// correct.
pub fn approx_sqrt_decimal(q: &Rational, digits: usize) -> Result<String, ExactError> {
    if q.is_negative() {
        return Err(ExactError::Domain(format!("square root of negative {q}")));
    }
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (q * Rational::from_integer(&scale * &scale)).floor().to_integer();
    let (int_part, frac_part) = scaled.sqrt().div_rem(&scale);
    if digits == 0 {
        return Ok(int_part.to_string());
    }
    let frac = frac_part.to_string();
    Ok(format!("{int_part}.{}{frac}", "0".repeat(digits - frac.len())))
}

/// `Rational` as `f64`, for human-facing ratios only.
pub fn to_f64(q: &Rational) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}
