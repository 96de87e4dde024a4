//! Exact rational arithmetic helpers for the symbolic layer.
//!
//! All symbolic constants are `BigRational`; floats only appear once a
//! parameter binding is applied in the numeric layer.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

/// Rational from an integer.
pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parse an integer or decimal literal (`7`, `0.5`, `12.25`) into an exact
/// rational. Decimal digits become a power-of-ten denominator, so `0.5`
/// is exactly `1/2`. Returns `None` for anything else (signs are handled
/// by the grammar, not the literal).
pub fn parse_number_literal(text: &str) -> Option<BigRational> {
    if text.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (text, None),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut numer: BigInt = int_part.parse().ok()?;
    let mut denom = BigInt::one();
    if let Some(frac) = frac_part {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_numer: BigInt = frac.parse().ok()?;
        numer = numer * &scale + frac_numer;
        denom = scale;
    }
    Some(BigRational::new(numer, denom))
}

/// Canonical text for a rational: integers render bare (`7`, `-3`),
/// everything else as a reduced fraction (`1/2`, `-4/3`).
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest f64; rationals beyond f64 range collapse to +/-inf.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_zero() {
            0.0
        } else if r.numer().sign() == num::bigint::Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_number_literal("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_number_literal("12.25").unwrap(), rat(49, 4));
        assert_eq!(parse_number_literal("7").unwrap(), rat_int(7));
        assert_eq!(parse_number_literal("0.1").unwrap(), rat(1, 10));
    }

    #[test]
    fn malformed_literals_rejected() {
        for bad in ["", ".", "1.", ".5", "1.2.3", "1e3", "-1", "a"] {
            assert!(parse_number_literal(bad).is_none(), "accepted {bad:?}");
        }
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&rat_int(7)), "7");
        assert_eq!(format_rational(&rat(-1, 2)), "-1/2");
        assert_eq!(format_rational(&rat(4, 6)), "2/3");
    }
}
