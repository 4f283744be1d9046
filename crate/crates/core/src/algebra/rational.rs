//! Arbitrary-precision rational scalars.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::ToPrimitive;

/// Exact scalar used throughout the engine. Always stored reduced with a
/// positive denominator (guaranteed by the backing implementation).
pub type Rational = BigRational;

/// `num/den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer shorthand.
pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Nearest double, or `None` when the value overflows the double range.
pub fn rat_to_f64(r: &Rational) -> Option<f64> {
    r.to_f64().filter(|v| v.is_finite())
}

/// Exact square root when `r` is a perfect square of a rational, else `None`.
pub fn rat_sqrt(r: &Rational) -> Option<Rational> {
    use num::traits::Signed;
    if r.is_negative() {
        return None;
    }
    let num_root = r.numer().sqrt();
    let den_root = r.denom().sqrt();
    if &num_root * &num_root == *r.numer() && &den_root * &den_root == *r.denom() {
        Some(Rational::new(num_root, den_root))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_reduce() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(3, -6), rat(-1, 2));
        assert_eq!(rat_int(5), rat(5, 1));
    }

    #[test]
    fn display_is_reduced_fraction() {
        assert_eq!(rat(3, 2).to_string(), "3/2");
        assert_eq!(rat(-3, 2).to_string(), "-3/2");
        assert_eq!(rat_int(7).to_string(), "7");
        assert_eq!(rat(0, 5).to_string(), "0");
    }

    #[test]
    fn float_conversion() {
        assert_eq!(rat_to_f64(&rat(1, 2)), Some(0.5));
        assert_eq!(rat_to_f64(&rat(-7, 4)), Some(-1.75));
    }

    #[test]
    fn sqrt_of_perfect_squares() {
        assert_eq!(rat_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rat_sqrt(&rat_int(49)), Some(rat_int(7)));
        assert_eq!(rat_sqrt(&rat(2, 1)), None);
        assert_eq!(rat_sqrt(&rat(-1, 4)), None);
        assert_eq!(rat_sqrt(&rat_int(0)), Some(rat_int(0)));
    }
}
