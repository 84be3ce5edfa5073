//! Exact rational numbers.
//!
//! Every quantity in the crate (terms, tails, interval endpoints, ratios) is a
//! [`Rational`]: an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Arithmetic and comparison are exact.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Builds `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`, with optional sign on the numerator.
///
/// Decimal and exponent notation are rejected: a decimal literal would have to
/// be coerced to a nearby rational, which changes the number being described.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    if s.is_empty() || s.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Canonical text form: `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: u64) -> Rational {
    let mut result = Rational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    result
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Numerator and denominator each overflow f64; scale both down.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Returns `Some(n)` when `r` is a non-negative integer that fits in `u64`.
pub fn as_u64(r: &Rational) -> Option<u64> {
    if r.is_integer() && !r.is_negative() {
        r.numer().to_u64()
    } else {
        None
    }
}

/// Greatest common divisor of numerators over least common multiple of
/// denominators: the largest rational `c` such that every `values[i] / c` is an
/// integer. Returns zero for an empty or all-zero input.
pub fn rational_gcd(values: &[Rational]) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for v in values {
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    Rational::new(num, den)
}
