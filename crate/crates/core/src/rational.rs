//! Exact rational numbers and small helpers around them.
//!
//! Everything in this crate is exact; `Rational` is an arbitrary-precision
//! fraction that is always kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// Builds `num/den` as a reduced rational. Panics on a zero denominator.
pub fn q(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses `"p/q"`, `"-p/q"` or an integer literal. Whitespace is ignored.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || ParseRationalError(text.to_string());
    if cleaned.is_empty() {
        return Err(err());
    }
    let (num, den) = match cleaned.split_once('/') {
        Some((n, d)) => (n, d),
        None => (cleaned.as_str(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `k`-digit decimal approximation, for display only.
pub fn decimal_approx(r: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r * Rational::from_integer(scale.clone())).round();
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let abs = n.abs();
    let (int_part, frac_part) = abs.div_rem(&scale);
    let frac = format!("{:0>width$}", frac_part.to_string(), width = digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Exact rational power `base^exp`, when it exists in the rationals.
///
/// Returns `None` if the result is irrational (e.g. `2^(1/2)`) or undefined.
pub fn rational_pow(base: &Rational, exp: &Rational) -> Option<Rational> {
    if exp.is_zero() {
        return Some(Rational::one());
    }
    if base.is_zero() {
        return if exp.is_positive() { Some(Rational::zero()) } else { None };
    }
    let root_index = exp.denom().to_u32()?;
    let power = exp.numer().clone();
    let numer_root = exact_root(base.numer(), root_index)?;
    let denom_root = exact_root(base.denom(), root_index)?;
    let root = Rational::new(numer_root, denom_root);
    let p = power.abs().to_i32()?;
    let raised = num_traits::pow::pow(root, p as usize);
    if power.is_negative() {
        Some(raised.recip())
    } else {
        Some(raised)
    }
}

/// Exact integer `k`-th root, if one exists (negative bases only for odd `k`).
fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if k == 1 {
        return Some(n.clone());
    }
    if n.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return exact_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if r.pow(k) == *n {
        Some(r)
    } else {
        None
    }
}

/// `true` when the rational is an integer.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for text in ["0", "7", "-3/4", "1463/65536", "-23433/1048576"] {
            let r = parse_rational(text).unwrap();
            assert_eq!(fmt_rational(&r), text);
        }
        assert_eq!(parse_rational("6/8").unwrap(), q(3, 4));
        assert_eq!(parse_rational(" -2 / 4 ").unwrap(), q(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn lowest_terms_positive_denominator() {
        let r = q(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn rational_powers() {
        assert_eq!(rational_pow(&q(4, 9), &q(1, 2)), Some(q(2, 3)));
        assert_eq!(rational_pow(&q(4, 9), &q(-3, 2)), Some(q(27, 8)));
        assert_eq!(rational_pow(&q(-8, 27), &q(1, 3)), Some(q(-2, 3)));
        assert_eq!(rational_pow(&q(2, 1), &q(1, 2)), None);
        assert_eq!(rational_pow(&q(-4, 1), &q(1, 2)), None);
        assert_eq!(rational_pow(&q(5, 7), &q(0, 1)), Some(qi(1)));
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal_approx(&q(1, 3), 4), "0.3333");
        assert_eq!(decimal_approx(&q(-3, 32), 3), "-0.094");
        assert_eq!(decimal_approx(&q(5, 2), 0), "3");
    }
}
