//! Scalar abstractions shared by the polynomial, series and zeta layers.
//!
//! Exact combinatorics runs over [`BigRational`]; numeric evaluation runs over
//! any [`Real`]: `f32`, `f64`, or the arbitrary-precision [`Fixed`] type.
//!
//! [`Fixed`]: crate::fixed::Fixed

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// A coefficient field the combinatorial layers can compute in.
pub trait Scalar: Clone + fmt::Debug + PartialEq + Num + Signed + Send + Sync + 'static {
    fn from_ratio(r: &BigRational) -> Self;

    fn from_bigint(n: &BigInt) -> Self {
        Self::from_ratio(&BigRational::from_integer(n.clone()))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }
}

/// An ordered approximation of the reals with a known resolution.
pub trait Real: Scalar + PartialOrd {
    /// Decimal digits this type can carry reliably.
    const DIGITS: u32;

    fn to_f64(&self) -> f64;

    fn pi() -> Self;

    /// Absolute rounding error of one arithmetic operation producing `self`.
    fn ulp(&self) -> Self;

    fn to_decimal(&self, digits: usize) -> String;

    fn powu(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for BigRational {
    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }
}

macro_rules! impl_float {
    ($t:ty, $digits:expr) => {
        impl Scalar for $t {
            fn from_ratio(r: &BigRational) -> Self {
                ratio_to_f64(r) as $t
            }
        }

        impl Real for $t {
            const DIGITS: u32 = $digits;

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn pi() -> Self {
                std::f64::consts::PI as $t
            }

            fn ulp(&self) -> Self {
                self.abs() * <$t>::EPSILON + <$t>::MIN_POSITIVE
            }

            fn to_decimal(&self, digits: usize) -> String {
                format!("{:.*}", digits.min($digits as usize + 2), self)
            }
        }
    };
}

impl_float!(f32, 6);
impl_float!(f64, 15);

/// Converts a rational to the nearest `f64`, also for numerators and
/// denominators far outside the `f64` range.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift_n = r.numer().bits().saturating_sub(64) as i64;
    let shift_d = r.denom().bits().saturating_sub(64) as i64;
    let n = (r.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    scale_pow2(n / d, shift_n - shift_d)
}

/// `x * 2^e` without intermediate overflow.
pub(crate) fn scale_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 500 {
        x *= 2f64.powi(500);
        e -= 500;
    }
    while e < -500 {
        x *= 2f64.powi(-500);
        e += 500;
    }
    x * 2f64.powi(e as i32)
}

/// Formats an exact rational as `p/q`, or `p` when the denominator is one.
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `-1.25` into an exact rational.
pub fn parse_ratio(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let mut n: BigInt = digits.parse().ok()?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(n, d));
    }
    text.parse::<BigInt>().ok().map(BigRational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_round_trip() {
        for s in ["0", "-3", "7/2", "-15/4"] {
            let r = parse_ratio(s).unwrap();
            assert_eq!(format_ratio(&r), s);
        }
        assert_eq!(
            parse_ratio("1.25").unwrap(),
            BigRational::new(5.into(), 4.into())
        );
        assert_eq!(
            parse_ratio("-0.5").unwrap(),
            BigRational::new((-1).into(), 2.into())
        );
        assert!(parse_ratio("1/0").is_none());
        assert!(parse_ratio("abc").is_none());
    }

    #[test]
    fn huge_ratio_to_f64() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let r = BigRational::new(big.clone() * 3, big * 2);
        assert!((ratio_to_f64(&r) - 1.5).abs() < 1e-15);
        let tiny = BigRational::new(BigInt::from(1), num_traits::pow(BigInt::from(2), 1100));
        assert_eq!(ratio_to_f64(&tiny), 0.0);
    }

    #[test]
    fn powu_matches_powi() {
        assert_eq!(3.0f64.powu(5), 243.0);
        assert_eq!(2.0f32.powu(0), 1.0);
    }
}
