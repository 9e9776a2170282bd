//! Small helpers for arbitrary-precision scalars.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Natural logarithm of a positive big integer, accurate even when the
/// value overflows `f64`.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "ln of non-positive integer");
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v.ln();
        }
    }
    // Split into mantissa * 2^shift with a 64-bit mantissa.
    let bits = x.bits();
    let shift = bits.saturating_sub(53);
    let mantissa = (x >> shift).to_f64().unwrap();
    mantissa.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational.
pub fn ln_big_rational(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "ln of non-positive rational");
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

pub fn big(i: i64) -> BigInt {
    BigInt::from(i)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses a decimal integer string (used by the JSON wire formats, which
/// carry big integers as strings to stay bit-exact).
pub fn parse_bigint(s: &str) -> Option<BigInt> {
    s.parse::<BigInt>().ok()
}

/// Parses `"p"` or `"p/q"` into an exact rational.
pub fn parse_big_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        None => Some(BigRational::from_integer(s.trim().parse::<BigInt>().ok()?)),
        Some((n, d)) => {
            let den: BigInt = d.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, den))
        }
    }
}

/// Renders a rational as `"p"` or `"p/q"`.
pub fn format_big_rational(x: &BigRational) -> String {
    if x.denom() == &BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Formats a float with 12 significant digits, the stable CLI convention.
pub fn format_f64(x: f64) -> String {
    format!("{x:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn ln_of_huge_integer() {
        let x = BigInt::from(3u8).pow(400);
        let expected = 400.0 * 3.0f64.ln();
        assert!((ln_bigint(&x) - expected).abs() < 1e-9);
    }

    #[test]
    fn rational_string_round_trip() {
        let x = rat(-7, 3);
        assert_eq!(format_big_rational(&x), "-7/3");
        assert_eq!(parse_big_rational("-7/3").unwrap(), x);
        assert_eq!(parse_big_rational("42").unwrap(), rat_int(42));
        assert!(parse_big_rational("1/0").is_none());
    }
}
