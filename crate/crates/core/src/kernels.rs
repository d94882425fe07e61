//! Integer sequences used throughout: binomials, Stirling numbers of the
//! second kind, Eulerian numbers and Bernoulli numbers. All exact.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)` for any integer `n`, via the falling factorial; zero when
/// `0 <= n < k`.
pub fn binomial(n: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    for j in 0..k as i64 {
        num *= n - j;
    }
    num / factorial(k)
}

/// `C(x, k) = x (x-1) ... (x-k+1) / k!` evaluated in any scalar field.
pub fn binomial_at<T: Scalar>(x: &T, k: usize) -> T {
    let mut acc = T::one();
    let mut shift = T::zero();
    for _ in 0..k {
        acc = acc * (x.clone() - shift.clone());
        shift = shift + T::one();
    }
    acc / T::from_bigint(&factorial(k as u64))
}

/// Stirling numbers of the second kind, `S(n, k)`; `S(0, 0) = 1`.
pub fn stirling2(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::one();
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            row[j] = &row[j] * j + &row[j - 1];
        }
        row[0] = BigInt::zero();
    }
    row[k].clone()
}

/// Eulerian number `A(n, i)`, the number of permutations of `n` letters with
/// `i` descents, by the explicit alternating sum
/// `A(n, i) = sum_r (-1)^r C(n+1, r) (i+1-r)^n` over `i + 1 - r > 0`.
pub fn eulerian(n: usize, i: usize) -> Result<BigInt> {
    if i >= n {
        return Err(Error::IndexOutOfRange {
            what: format!("Eulerian index {i} for n = {n}; need 0 <= i < n"),
        });
    }
    let mut acc = BigInt::zero();
    for r in 0..=i {
        let term = binomial(n as i64 + 1, r as u64) * num_traits::pow(BigInt::from(i + 1 - r), n);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `A(n, 0), ..., A(n, n-1)`; the empty row for `n = 0`.
pub fn eulerian_row(n: usize) -> Vec<BigInt> {
    (0..n)
        .map(|i| eulerian(n, i).expect("index in range"))
        .collect()
}

/// Bernoulli number `B_m` with `B_1 = +1/2`, i.e. the coefficients of
/// `x / (1 - e^{-x})`. Even-index values agree with every other convention.
pub fn bernoulli(m: usize) -> BigRational {
    static TABLE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut table = table.lock().expect("bernoulli table poisoned");
    // sum_{k<=m} C(m+1, k) B_k = 0 with B_1 = -1/2
    while table.len() <= m {
        let n = table.len();
        let mut acc = BigRational::zero();
        for (k, b) in table.iter().enumerate() {
            let b = if k == 1 { -b.clone() } else { b.clone() };
            acc += b * BigRational::from_integer(binomial(n as i64 + 1, k as u64));
        }
        let value = -acc / BigRational::from_integer(BigInt::from(n + 1));
        table.push(if n == 1 { value.abs() } else { value });
    }
    table[m].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.into());
        assert_eq!(binomial(2, 3), 0.into());
        assert_eq!(binomial(-2, 2), 3.into());
        assert_eq!(binomial(-3, 3), (-10).into());
        assert_eq!(binomial(7, 0), 1.into());
        assert_eq!(binomial_at(&q(5, 1), 2), q(10, 1));
        assert_eq!(binomial_at(&q(1, 2), 2), q(-1, 8));
        assert_eq!(binomial_at(&5.0f64, 3), 10.0);
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(3, 2), 3.into());
        assert_eq!(stirling2(4, 2), 7.into());
        assert_eq!(stirling2(0, 0), 1.into());
        assert_eq!(stirling2(5, 0), 0.into());
        assert_eq!(stirling2(2, 5), 0.into());
        for n in 0..10 {
            assert_eq!(stirling2(n, n), 1.into());
        }
        for n in 1..9 {
            for k in 1..=n {
                assert_eq!(
                    stirling2(n, k),
                    stirling2(n - 1, k) * k + stirling2(n - 1, k - 1)
                );
            }
        }
    }

    #[test]
    fn eulerian_values() {
        assert_eq!(eulerian(3, 1).unwrap(), 4.into());
        for n in 1..10 {
            assert_eq!(eulerian(n, 0).unwrap(), 1.into());
        }
        let row: Vec<BigInt> = eulerian_row(4);
        assert_eq!(row, vec![1.into(), 11.into(), 11.into(), 1.into()]);
        for n in 1..10 {
            let sum: BigInt = eulerian_row(n).into_iter().sum();
            assert_eq!(sum, factorial(n as u64));
        }
        assert!(matches!(eulerian(3, 3), Err(Error::IndexOutOfRange { .. })));
        assert!(eulerian(0, 0).is_err());
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(3), q(0, 1));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(12), q(-691, 2730));
        for m in (3..40).step_by(2) {
            assert!(bernoulli(m).is_zero());
        }
    }
}
