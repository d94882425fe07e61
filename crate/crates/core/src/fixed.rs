//! Binary fixed-point reals of arbitrary width.
//!
//! `Fixed<F>` stores `m / 2^F` with an unbounded integer mantissa `m`, so the
//! absolute resolution is `2^-F` regardless of magnitude. That is the error
//! model zeta tails need: values like `zeta(80) - 1` are tiny but are summed
//! against terms of size one.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::scalar::{parse_ratio, scale_pow2, Real, Scalar};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixed<const F: u32>(BigInt);

impl<const F: u32> Fixed<F> {
    pub fn from_mantissa(m: BigInt) -> Self {
        Fixed(m)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.0
    }

    /// The smallest positive representable value, `2^-F`.
    pub fn resolution() -> Self {
        Fixed(BigInt::one())
    }

    fn half() -> BigInt {
        BigInt::one() << (F.max(1) - 1) as usize
    }
}

impl<const F: u32> Add for Fixed<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fixed(self.0 + rhs.0)
    }
}

impl<const F: u32> Sub for Fixed<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fixed(self.0 - rhs.0)
    }
}

impl<const F: u32> Mul for Fixed<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // arithmetic shift floors, so adding half rounds to nearest
        Fixed((self.0 * rhs.0 + Self::half()) >> F as usize)
    }
}

impl<const F: u32> Div for Fixed<F> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.0.is_zero(), "Fixed division by zero");
        let (num, den) = if rhs.0.sign() == Sign::Minus {
            (-self.0, -rhs.0)
        } else {
            (self.0, rhs.0)
        };
        // round(num * 2^F / den)
        let twice = (num << (F as usize + 1)) + &den;
        Fixed(twice.div_floor(&(den << 1usize)))
    }
}

impl<const F: u32> Rem for Fixed<F> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        let q = &self.0 / &rhs.0;
        Fixed(self.0 - q * rhs.0)
    }
}

impl<const F: u32> Neg for Fixed<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Fixed(-self.0)
    }
}

impl<const F: u32> Zero for Fixed<F> {
    fn zero() -> Self {
        Fixed(BigInt::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl<const F: u32> One for Fixed<F> {
    fn one() -> Self {
        Fixed(BigInt::one() << F as usize)
    }
}

impl<const F: u32> Num for Fixed<F> {
    type FromStrRadixErr = String;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(format!("unsupported radix {radix}"));
        }
        parse_ratio(s)
            .map(|r| Self::from_ratio(&r))
            .ok_or_else(|| format!("invalid number `{s}`"))
    }
}

impl<const F: u32> Signed for Fixed<F> {
    fn abs(&self) -> Self {
        Fixed(self.0.abs())
    }

    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Self::zero()
        } else {
            self.clone() - other.clone()
        }
    }

    fn signum(&self) -> Self {
        match self.0.sign() {
            Sign::Minus => -Self::one(),
            Sign::NoSign => Self::zero(),
            Sign::Plus => Self::one(),
        }
    }

    fn is_positive(&self) -> bool {
        self.0.sign() == Sign::Plus
    }

    fn is_negative(&self) -> bool {
        self.0.sign() == Sign::Minus
    }
}

impl<const F: u32> Scalar for Fixed<F> {
    fn from_ratio(r: &BigRational) -> Self {
        let num = (r.numer() << (F as usize + 1)) + r.denom();
        let den = r.denom() << 1usize;
        Fixed(num.div_floor(&den))
    }

    fn from_bigint(n: &BigInt) -> Self {
        Fixed(n << F as usize)
    }
}

impl<const F: u32> Real for Fixed<F> {
    // log10(2) ~ 0.30103; keep a few digits of headroom for rounding
    const DIGITS: u32 = (F as u64 * 30103 / 100000) as u32 - 3;

    fn to_f64(&self) -> f64 {
        let bits = self.0.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = num_traits::ToPrimitive::to_f64(&(&self.0 >> drop as usize)).unwrap_or(0.0);
        scale_pow2(top, drop - F as i64)
    }

    fn pi() -> Self {
        Fixed(pi_scaled(F))
    }

    fn ulp(&self) -> Self {
        Self::resolution()
    }

    fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.min(Self::DIGITS as usize);
        let scale = num_traits::pow(BigInt::from(10), digits);
        let abs = self.0.abs();
        let scaled = (abs * &scale + Self::half()) >> F as usize;
        let (int, frac) = scaled.div_rem(&scale);
        let sign = if self.0.sign() == Sign::Minus && !(int.is_zero() && frac.is_zero()) {
            "-"
        } else {
            ""
        };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac:0>digits$}")
        }
    }
}

impl<const F: u32> fmt::Debug for Fixed<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fixed<{F}>({})", self.to_decimal(20))
    }
}

impl<const F: u32> fmt::Display for Fixed<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(Self::DIGITS as usize);
        f.write_str(&self.to_decimal(digits))
    }
}

impl<const F: u32> PartialEq<f64> for Fixed<F> {
    fn eq(&self, other: &f64) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl<const F: u32> PartialOrd<f64> for Fixed<F> {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.to_f64().partial_cmp(other)
    }
}

/// `round(pi * 2^bits)` via Machin's formula with guard bits.
fn pi_scaled(bits: u32) -> BigInt {
    let guard = 32usize;
    let work = bits as usize + guard;
    let one = BigInt::one() << work;
    let atan_inv = |x: u64| -> BigInt {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut power = &one / &x;
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !power.is_zero() {
            let term = &power / BigInt::from(2 * k + 1);
            if k.is_multiple_of(2) {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &x2;
            k += 1;
        }
        sum
    };
    let pi = atan_inv(5) * 16 - atan_inv(239) * 4;
    (pi + (BigInt::one() << (guard - 1))) >> guard
}
