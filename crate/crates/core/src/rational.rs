//! Exact rational arithmetic helpers.
//!
//! Every quantity the separators compare against a threshold goes through
//! [`Rational`], an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. There is no floating point in any decision path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always normalized.
pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half() -> Rational {
    frac(1, 2)
}

/// Returns the value as an `i64` if it is an integer that fits.
pub fn to_i64(value: &Rational) -> Option<i64> {
    if !value.is_integer() {
        return None;
    }
    i64::try_from(value.to_integer()).ok()
}

/// Exact dot product of an integer row with a rational point.
pub fn dot_int(row: &[i64], point: &[Rational]) -> Rational {
    row.iter()
        .zip(point)
        .filter(|(a, _)| **a != 0)
        .fold(zero(), |acc, (a, x)| acc + x * BigInt::from(*a))
}

/// `a·x` for an integer row and an integer point.
pub fn dot_i64(row: &[i64], point: &[i64]) -> i64 {
    row.iter().zip(point).map(|(a, x)| a * x).sum()
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse(token: &str) -> Option<Rational> {
    let token = token.trim();
    match token.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().ok()?;
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() || q.is_negative() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => token.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Renders as `p/q`, or `p` when the denominator is one.
pub fn render(value: &Rational) -> String {
    value.to_string()
}

pub fn render_all(values: &[Rational]) -> String {
    values.iter().map(render).collect::<Vec<_>>().join(" ")
}
