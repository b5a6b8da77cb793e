//! Exact rational arithmetic used for every invariant in this crate.
//!
//! All Euler characteristics, sector sums and degree shifts are computed as
//! `BigRational` values so the identity checks are exact equalities, never
//! floating-point comparisons.

use num::{BigInt, BigRational, One, Zero};

pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `p/q`, panicking on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Formats as `"p/q"` with the denominator always present and positive,
/// e.g. `4/3`, `2/1`, `-1/3`. This is the wire format for every rational
/// in the JSON reports.
pub fn rat_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses the `"p/q"` wire format; a bare integer `"p"` is also accepted.
pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(p))
        }
    }
}

/// `(-1)^dim` as a rational, the alternating sign of every Euler sum here.
pub fn alternating(dim: usize) -> Rational {
    if dim % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format_is_always_reduced_with_denominator() {
        assert_eq!(rat_string(&rat(4, 3)), "4/3");
        assert_eq!(rat_string(&rat(2, 1)), "2/1");
        assert_eq!(rat_string(&rat(6, 3)), "2/1");
        assert_eq!(rat_string(&rat(1, -3)), "-1/3");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["4/3", "2/1", "-1/3", "0/1"] {
            assert_eq!(rat_string(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }
}
