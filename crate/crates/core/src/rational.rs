//! Exact rational numbers and their textual forms.
//!
//! Every probability in this crate is a [`Rational`]. The underlying type keeps
//! values in lowest terms with a positive denominator, so structural equality
//! is numeric equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Builds `num / den` from machine integers.
///
/// Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integer-valued rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `a/b`, `-a/b` or a bare integer.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse {
        line: 0,
        message: format!("invalid rational `{text}`"),
    };
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix('-')
                .or_else(|| s.strip_prefix('+'))
                .unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Renders exactly as `a/b`, or `a` when the denominator is one.
pub fn format_exact(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal rendering with `digits` significant digits, rounding half to even.
///
/// Display only; nothing in the analysis path reads these strings back.
pub fn format_decimal(value: &Rational, digits: usize) -> String {
    assert!(digits > 0, "at least one significant digit");
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let abs = value.abs();

    // Find exponent e with 10^e <= abs < 10^(e+1).
    let ten = BigInt::from(10);
    let mut exp: i64 = 0;
    let mut probe = abs.clone();
    while probe >= Rational::from_integer(ten.clone()) {
        probe /= Rational::from_integer(ten.clone());
        exp += 1;
    }
    while probe < Rational::one() {
        probe *= Rational::from_integer(ten.clone());
        exp -= 1;
    }

    // Scale so that the integer part carries exactly `digits` digits.
    let shift = digits as i64 - 1 - exp;
    let scaled = if shift >= 0 {
        abs * Rational::from_integer(ten.pow(shift as u32))
    } else {
        abs / Rational::from_integer(ten.pow((-shift) as u32))
    };
    let (quot, rem) = scaled.numer().div_rem(scaled.denom());
    let twice: BigInt = &rem * 2;
    let mut mantissa = match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Less => quot,
        std::cmp::Ordering::Greater => quot + 1,
        std::cmp::Ordering::Equal => {
            if quot.is_even() {
                quot
            } else {
                quot + 1
            }
        }
    };
    let mut shift = shift;
    // Rounding up may add a digit (9.99.. -> 10.0..).
    if mantissa.to_string().len() > digits {
        mantissa /= 10;
        shift -= 1;
    }

    let mut text = mantissa.to_string();
    let body = if shift <= 0 {
        text.extend(std::iter::repeat_n('0', (-shift) as usize));
        text
    } else {
        let shift = shift as usize;
        if text.len() <= shift {
            let pad = "0".repeat(shift - text.len());
            format!("0.{pad}{text}")
        } else {
            let (int_part, frac) = text.split_at(text.len() - shift);
            format!("{int_part}.{frac}")
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Least common multiple of the denominators of `values`.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales `values` onto a shared denominator and returns the numerators.
pub(crate) fn scaled_numerators(values: &[Rational], denominator: &BigInt) -> Vec<BigInt> {
    values
        .iter()
        .map(|v| v.numer() * (denominator / v.denom()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("2/6").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational("1").unwrap(), int(1));
        assert_eq!(parse_rational("-3/9").unwrap(), ratio(-1, 3));
        assert_eq!(parse_rational("0").unwrap(), int(0));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1/0", "a/2", "1/-2", "1.5", "1//2", "/3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn exact_format() {
        assert_eq!(format_exact(&ratio(4, 14)), "2/7");
        assert_eq!(format_exact(&int(1)), "1");
        assert_eq!(format_exact(&ratio(-1, 2)), "-1/2");
    }

    #[test]
    fn decimal_format() {
        assert_eq!(
            format_decimal(&ratio(1916, 2015), 20),
            "0.95086848635235732010"
        );
        assert_eq!(format_decimal(&ratio(1, 3), 5), "0.33333");
        assert_eq!(format_decimal(&ratio(2, 3), 5), "0.66667");
        assert_eq!(format_decimal(&int(1), 20), "1.0000000000000000000");
        assert_eq!(format_decimal(&ratio(1, 8), 2), "0.12");
        assert_eq!(format_decimal(&ratio(3, 8), 2), "0.38");
        assert_eq!(format_decimal(&ratio(999_999, 1_000_000), 3), "1.00");
        assert_eq!(format_decimal(&ratio(1234, 1), 2), "1200");
        assert_eq!(format_decimal(&ratio(-1, 4), 3), "-0.250");
    }
}
