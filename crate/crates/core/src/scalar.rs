//! Exact rational scalars.
//!
//! Everything in the engine is computed over `Q`; there is no floating point
//! anywhere. [`Q`] is a normalized arbitrary-precision fraction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// An exact rational number, always normalized (positive denominator, gcd 1).
pub type Q = BigRational;

/// Builds `num / den`. Panics when `den == 0`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `(-1)^e` as a rational.
pub fn sign(e: i64) -> Q {
    if e.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

pub fn factorial(n: usize) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Q::from_integer(acc)
}

/// Formats as `p/q`, omitting `/q` when the denominator is one.
pub fn format_q(value: &Q) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `p`, `-p`, `p/q` or `-p/q` with decimal integers.
pub fn parse_q(text: &str) -> Result<Q, Error> {
    let bad = || Error::Parse {
        line: 0,
        column: 0,
        message: format!("invalid rational `{text}`"),
    };
    let text = text.trim();
    if text.is_empty() {
        return Err(bad());
    }
    let digits_ok = |s: &str| {
        let s = s.strip_prefix('-').unwrap_or(s);
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    if !digits_ok(num) || !den.bytes().all(|b| b.is_ascii_digit()) || den.is_empty() {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

pub fn is_negative(value: &Q) -> bool {
    value.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_after_construction() {
        let v = q(6, -4);
        assert_eq!(v.numer(), &BigInt::from(-3));
        assert_eq!(v.denom(), &BigInt::from(2));
        assert_eq!(format_q(&v), "-3/2");
        assert_eq!(format_q(&int(5)), "5");
    }

    #[test]
    fn parses_exact_forms() {
        assert_eq!(parse_q("1/36").unwrap(), q(1, 36));
        assert_eq!(parse_q("-2/4").unwrap(), q(-1, 2));
        assert_eq!(parse_q("7").unwrap(), int(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("1.5").is_err());
        assert!(parse_q("--1").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(4), int(24));
    }
}
