//! Numeric zeta values by Euler-Maclaurin summation with a certified bound.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fixed::Fixed;
use crate::kernels::{bernoulli, factorial};
use crate::scalar::Real;

/// Working precision and verification thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionContext {
    pub digits: u32,
    pub tolerance: f64,
    /// Upper limit on summed terms in any single series.
    pub term_cap: usize,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            digits: 50,
            tolerance: 1e-12,
            term_cap: 100_000,
        }
    }
}

impl PrecisionContext {
    pub fn with_digits(digits: u32) -> Self {
        PrecisionContext {
            digits,
            ..Self::default()
        }
    }

    /// The tolerance must be looser than what the working precision can
    /// certify.
    pub fn validate(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 || !self.tolerance.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        if self.tolerance <= 10f64.powi(-(self.digits.min(300) as i32)) {
            return Err(Error::PrecisionUnachievable {
                requested: self.digits,
                reason: format!(
                    "tolerance {:e} is not looser than 1e-{} working precision",
                    self.tolerance, self.digits
                ),
            });
        }
        Ok(())
    }
}

/// A value with an absolute error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate<R> {
    pub value: R,
    pub bound: R,
}

impl<R: Real> Estimate<R> {
    pub fn exact(value: R) -> Self {
        Estimate {
            value,
            bound: R::zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Estimate {
            value: self.value.clone() + other.value.clone(),
            bound: self.bound.clone() + other.bound.clone(),
        }
    }

    /// Multiplication by an exactly known rational.
    pub fn scale(&self, c: &BigRational) -> Self {
        let k = R::from_ratio(c);
        let value = self.value.clone() * k.clone();
        let rounding = value.ulp() * R::from_i64(2);
        Estimate {
            bound: self.bound.clone() * k.abs() + rounding,
            value,
        }
    }

    /// True when `other` lies within the combined error bounds plus `slack`.
    pub fn agrees(&self, other: &Self, slack: &R) -> bool {
        (self.value.clone() - other.value.clone()).abs()
            <= self.bound.clone() + other.bound.clone() + slack.clone()
    }
}

/// `10^-digits` as an exact rational.
fn decimal_epsilon(digits: u32) -> BigRational {
    BigRational::new(
        BigInt::one(),
        num_traits::pow(BigInt::from(10), digits as usize),
    )
}

/// `zeta(s) - 1` to `digits` decimal digits, summing from `n = 2` so the
/// result keeps full relative accuracy when `s` is large.
///
/// `sum_{2<=n<N} n^-s + N^(1-s)/(s-1) + N^-s/2 + sum_j B_2j/(2j)! (s)_(2j-1) N^(-s-2j+1)`
/// with `(s)_m` the rising factorial; the remainder is bounded by the first
/// omitted correction.
pub fn zeta_minus_one<R: Real>(s: u32, digits: u32) -> Result<Estimate<R>> {
    if s < 2 {
        return Err(Error::InvalidParameter(format!("zeta({s}) needs s >= 2")));
    }
    if digits > R::DIGITS {
        return Err(Error::PrecisionUnachievable {
            requested: digits,
            reason: format!("working type carries {} digits", R::DIGITS),
        });
    }
    let target = R::from_ratio(&decimal_epsilon(digits + 2));
    let mut n = 50u64.max(digits as u64);
    loop {
        if let Some(est) = euler_maclaurin::<R>(s, n, &target) {
            return Ok(est);
        }
        n *= 2;
        if n > 1 << 20 {
            return Err(Error::PrecisionUnachievable {
                requested: digits,
                reason: format!("Euler-Maclaurin did not converge for s = {s}"),
            });
        }
    }
}

/// One attempt with cutoff `n`; `None` when the corrections start growing
/// before reaching `target`.
fn euler_maclaurin<R: Real>(s: u32, n: u64, target: &R) -> Option<Estimate<R>> {
    let one = R::one();
    let mut sum = R::zero();
    for k in 2..n {
        sum = sum + one.clone() / R::from_i64(k as i64).powu(s);
    }
    let big_n = R::from_i64(n as i64);
    // N^(1-s), then N^-s
    let mut power = one.clone() / big_n.powu(s - 1);
    sum = sum + power.clone() / R::from_i64(s as i64 - 1);
    power = power / big_n.clone();
    sum = sum + power.clone() / R::from_i64(2);

    let inv_n2 = one.clone() / (big_n.clone() * big_n);
    // power tracks N^(-s-2j+1), rising tracks (s)_(2j-1)
    power = power * R::from_i64(n as i64);
    let mut rising = BigInt::from(s);
    let mut previous: Option<R> = None;
    let mut ops = n as usize + 8;
    for j in 1usize.. {
        power = power * inv_n2.clone();
        if j > 1 {
            rising *= BigInt::from(s as usize + 2 * j - 3) * BigInt::from(s as usize + 2 * j - 2);
        }
        let c = bernoulli(2 * j) * BigRational::from_integer(rising.clone())
            / BigRational::from_integer(factorial(2 * j as u64));
        let term = R::from_ratio(&c) * power.clone();
        let size = term.abs();
        if size <= *target {
            let rounding = one.ulp() * R::from_i64(4 * ops as i64);
            return Some(Estimate {
                value: sum,
                bound: size + rounding,
            });
        }
        if previous.as_ref().is_some_and(|p| size >= *p) {
            return None;
        }
        sum = sum + term;
        ops += 3;
        previous = Some(size);
    }
    unreachable!()
}

/// `zeta(s) = 1 + (zeta(s) - 1)`.
pub fn zeta<R: Real>(s: u32, digits: u32) -> Result<Estimate<R>> {
    let e = cached_zeta_minus_one::<R>(s, digits)?;
    Ok(Estimate {
        value: e.value + R::one(),
        bound: e.bound,
    })
}

type CacheKey = (TypeId, u32, u32);

fn cache() -> &'static Mutex<HashMap<CacheKey, Box<dyn Any + Send + Sync>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Box<dyn Any + Send + Sync>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// [`zeta_minus_one`] memoized per `(type, s, digits)`.
pub fn cached_zeta_minus_one<R: Real>(s: u32, digits: u32) -> Result<Estimate<R>> {
    let key = (TypeId::of::<R>(), s, digits);
    if let Some(hit) = cache().lock().expect("zeta cache poisoned").get(&key) {
        if let Some(e) = hit.downcast_ref::<Estimate<R>>() {
            return Ok(e.clone());
        }
    }
    // computed outside the lock so concurrent callers do not serialize
    let e = zeta_minus_one::<R>(s, digits)?;
    cache()
        .lock()
        .expect("zeta cache poisoned")
        .insert(key, Box::new(e.clone()));
    Ok(e)
}

/// `zeta(2n) = (-1)^(n+1) (2 pi)^(2n) B_2n / (2 (2n)!)`.
pub fn zeta_even_closed_form<R: Real>(n: u32) -> R {
    let b = bernoulli(2 * n as usize);
    let c = b / BigRational::from_integer(factorial(2 * n as u64) * 2);
    let c = if n.is_multiple_of(2) { -c } else { c };
    (R::pi() * R::from_i64(2)).powu(2 * n) * R::from_ratio(&c)
}

/// The numeric types selected for a requested number of digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    F64,
    Fixed256,
    Fixed512,
    Fixed1024,
}

impl Backend {
    pub fn for_digits(digits: u32) -> Result<Backend> {
        Ok(match digits {
            0..=15 => Backend::F64,
            16..=60 => Backend::Fixed256,
            61..=135 => Backend::Fixed512,
            136..=290 => Backend::Fixed1024,
            _ => {
                return Err(Error::PrecisionUnachievable {
                    requested: digits,
                    reason: "at most 290 digits are supported".into(),
                })
            }
        })
    }
}

/// A computation that can run in any [`Real`].
pub trait PrecisionTask {
    type Output;
    fn run<R: Real>(self, ctx: &PrecisionContext) -> Result<Self::Output>;
}

/// Runs `task` in the narrowest type that carries `ctx.digits`.
pub fn dispatch<T: PrecisionTask>(task: T, ctx: &PrecisionContext) -> Result<T::Output> {
    match Backend::for_digits(ctx.digits)? {
        Backend::F64 => task.run::<f64>(ctx),
        Backend::Fixed256 => task.run::<Fixed<256>>(ctx),
        Backend::Fixed512 => task.run::<Fixed<512>>(ctx),
        Backend::Fixed1024 => task.run::<Fixed<1024>>(ctx),
    }
}

/// A zeta value rendered at the requested precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaNumber {
    pub s: u32,
    pub minus_one: bool,
    pub decimal: String,
    pub approx: f64,
    pub bound: f64,
}

struct ZetaTask {
    s: u32,
    minus_one: bool,
}

impl PrecisionTask for ZetaTask {
    type Output = ZetaNumber;
    fn run<R: Real>(self, ctx: &PrecisionContext) -> Result<ZetaNumber> {
        let e = if self.minus_one {
            cached_zeta_minus_one::<R>(self.s, ctx.digits)?
        } else {
            zeta::<R>(self.s, ctx.digits)?
        };
        Ok(ZetaNumber {
            s: self.s,
            minus_one: self.minus_one,
            decimal: e.value.to_decimal(ctx.digits as usize),
            approx: e.value.to_f64(),
            bound: e.bound.to_f64(),
        })
    }
}

/// `zeta(s)` or `zeta(s) - 1` at `ctx.digits`.
pub fn zeta_value(s: u32, ctx: &PrecisionContext, minus_one: bool) -> Result<ZetaNumber> {
    dispatch(ZetaTask { s, minus_one }, ctx)
}
