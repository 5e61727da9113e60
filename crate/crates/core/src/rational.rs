//! Scalars. Every coefficient in the crate is an exact, always-reduced
//! rational number backed by `num_rational::BigRational`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"n"` or `"n/d"` with `d > 0`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let num: BigInt = num.parse().ok()?;
    match den {
        None => Some(Rational::from_integer(num)),
        Some(d) => {
            let den: BigInt = d.parse().ok()?;
            if !den.is_positive() {
                return None;
            }
            Some(Rational::new(num, den))
        }
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

pub fn is_zero_point(p: &[Rational]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn to_string(r: &Rational) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reduces() {
        assert_eq!(parse("2/4"), Some(frac(1, 2)));
        assert_eq!(parse("-3"), Some(int(-3)));
        assert_eq!(parse("0/5"), Some(int(0)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("1/-2"), None);
        assert_eq!(parse("0.5"), None);
    }

    #[test]
    fn canonical_zero() {
        let z = frac(0, 7);
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
        assert_eq!(to_string(&frac(6, -4)), "-3/2");
    }
}
