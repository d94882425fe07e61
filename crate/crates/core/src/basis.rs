//! Polynomials over the binomial basis `{C(x, i)}` and the monomial basis
//! `{x^i}`, with exact conversion between them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::kernels::{binomial, binomial_at, factorial};
use crate::scalar::{format_ratio, parse_ratio, Scalar};

/// Which basis `eval` interprets the coefficients in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalBasis {
    /// `sum a_i C(x, i)`
    Binomial,
    /// `sum a_i C(x + i - 1, i)`, the multiset coefficients.
    Multiset,
}

/// `sum a_i C(x, i)` with finitely many nonzero `a_i`.
#[derive(Clone, PartialEq)]
pub struct BinomialPoly<T = BigRational> {
    coeffs: BTreeMap<usize, T>,
}

/// `sum c_i x^i`; `coeffs[i]` is `c_i`, with no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct MonomialPoly<T = BigRational> {
    coeffs: Vec<T>,
}

impl<T: Scalar> BinomialPoly<T> {
    pub fn zero() -> Self {
        BinomialPoly {
            coeffs: BTreeMap::new(),
        }
    }

    /// The single basis element `C(x, i)`.
    pub fn basis(i: usize) -> Self {
        Self::from_terms([(i, T::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, T)>) -> Self {
        let mut p = Self::zero();
        for (i, c) in terms {
            p.add_term(i, c);
        }
        p
    }

    /// `coeffs[i]` multiplies `C(x, i)`.
    pub fn from_vec(coeffs: Vec<T>) -> Self {
        Self::from_terms(coeffs.into_iter().enumerate())
    }

    pub fn add_term(&mut self, i: usize, c: T) {
        let entry = self.coeffs.entry(i).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(&i).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &T)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::from_terms(self.terms().map(|(i, c)| (i, c.clone() * k.clone())))
    }

    pub fn eval(&self, x: &T, basis: EvalBasis) -> T {
        self.terms().fold(T::zero(), |acc, (i, c)| {
            let b = match basis {
                EvalBasis::Binomial => binomial_at(x, i),
                EvalBasis::Multiset if i == 0 => T::one(),
                EvalBasis::Multiset => binomial_at(&(x.clone() + T::from_i64(i as i64 - 1)), i),
            };
            acc + c.clone() * b
        })
    }

    pub fn to_monomial(&self) -> MonomialPoly<T> {
        let mut out = MonomialPoly::zero();
        for (i, c) in self.terms() {
            // C(x, i) = x (x-1) ... (x-i+1) / i!
            let mut falling = MonomialPoly::constant(T::one());
            for j in 0..i {
                falling =
                    &falling * &MonomialPoly::from_vec(vec![T::from_i64(-(j as i64)), T::one()]);
            }
            let k = c.clone() / T::from_bigint(&factorial(i as u64));
            out = &out + &falling.scale(&k);
        }
        out
    }

    /// Re-expresses `sum a_i C(x + i - 1, i)` in the binomial basis, using
    /// `C(x + i - 1, i) = sum_j C(i - 1, i - j) C(x, j)`.
    pub fn from_multiset(coeffs: &BinomialPoly<T>) -> Self {
        let mut out = Self::zero();
        for (i, a) in coeffs.terms() {
            if i == 0 {
                out.add_term(0, a.clone());
                continue;
            }
            for j in 1..=i {
                let w = binomial(i as i64 - 1, (i - j) as u64);
                out.add_term(j, a.clone() * T::from_bigint(&w));
            }
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> BinomialPoly<U> {
        BinomialPoly::from_terms(self.terms().map(|(i, c)| (i, f(c))))
    }
}

impl<T: Scalar> MonomialPoly<T> {
    pub fn zero() -> Self {
        MonomialPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::from_vec(vec![c])
    }

    /// `x^n`
    pub fn power(n: usize) -> Self {
        let mut v = vec![T::zero(); n + 1];
        v[n] = T::one();
        Self::from_vec(v)
    }

    /// `(1 - x)^n`
    pub fn one_minus_x_pow(n: usize) -> Self {
        let base = Self::from_vec(vec![T::one(), -T::one()]);
        (0..n).fold(Self::constant(T::one()), |acc, _| &acc * &base)
    }

    pub fn from_vec(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        MonomialPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::from_vec(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// `p(-x)`
    pub fn reflect(&self) -> Self {
        Self::from_vec(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Newton forward differences at `0..=deg` give the binomial coordinates.
    pub fn to_binomial(&self) -> BinomialPoly<T> {
        let Some(deg) = self.degree() else {
            return BinomialPoly::zero();
        };
        let mut diffs: Vec<T> = (0..=deg)
            .map(|k| self.eval(&T::from_i64(k as i64)))
            .collect();
        let mut out = Vec::with_capacity(deg + 1);
        for _ in 0..=deg {
            out.push(diffs[0].clone());
            diffs = diffs
                .windows(2)
                .map(|w| w[1].clone() - w[0].clone())
                .collect();
        }
        BinomialPoly::from_vec(out)
    }
}

impl<T: Scalar> Add for &MonomialPoly<T> {
    type Output = MonomialPoly<T>;
    fn add(self, rhs: Self) -> MonomialPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        MonomialPoly::from_vec((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &MonomialPoly<T> {
    type Output = MonomialPoly<T>;
    fn sub(self, rhs: Self) -> MonomialPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        MonomialPoly::from_vec((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &MonomialPoly<T> {
    type Output = MonomialPoly<T>;
    fn mul(self, rhs: Self) -> MonomialPoly<T> {
        if self.is_zero() || rhs.is_zero() {
            return MonomialPoly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        MonomialPoly::from_vec(out)
    }
}

impl<T: Scalar> Add for &BinomialPoly<T> {
    type Output = BinomialPoly<T>;
    fn add(self, rhs: Self) -> BinomialPoly<T> {
        let mut out = self.clone();
        for (i, c) in rhs.terms() {
            out.add_term(i, c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &BinomialPoly<T> {
    type Output = BinomialPoly<T>;
    fn sub(self, rhs: Self) -> BinomialPoly<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &BinomialPoly<T> {
    type Output = BinomialPoly<T>;
    fn neg(self) -> BinomialPoly<T> {
        BinomialPoly::from_terms(self.terms().map(|(i, c)| (i, -c.clone())))
    }
}

fn write_terms<T: Scalar + fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (usize, T)>,
    symbol: impl Fn(usize) -> String,
) -> fmt::Result {
    let mut first = true;
    for (i, c) in terms {
        let negative = c.is_negative();
        let mag = c.abs();
        match (first, negative) {
            (true, true) => f.write_str("-")?,
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
            (true, false) => {}
        }
        let sym = symbol(i);
        if sym.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            f.write_str(&sym)?;
        } else {
            write!(f, "{mag} {sym}")?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl<T: Scalar + fmt::Display> fmt::Display for BinomialPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms().map(|(i, c)| (i, c.clone())), |i| {
            if i == 0 {
                String::new()
            } else {
                format!("C(x,{i})")
            }
        })
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for MonomialPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, T)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        write_terms(f, terms.into_iter(), |i| match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for BinomialPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinomialPoly({self})")
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for MonomialPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonomialPoly({self})")
    }
}

/// A polynomial tagged with its basis; the unit of basis conversion and of
/// the JSON wire form.
#[derive(Debug, Clone, PartialEq)]
pub enum Polynomial<T: Scalar + fmt::Display = BigRational> {
    Binomial(BinomialPoly<T>),
    Monomial(MonomialPoly<T>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToMonomial,
    ToBinomial,
}

impl<T: Scalar + fmt::Display> Polynomial<T> {
    pub fn convert(&self, direction: Direction) -> Polynomial<T> {
        match (self, direction) {
            (Polynomial::Binomial(p), Direction::ToMonomial) => {
                Polynomial::Monomial(p.to_monomial())
            }
            (Polynomial::Monomial(p), Direction::ToBinomial) => {
                Polynomial::Binomial(p.to_binomial())
            }
            _ => self.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    basis: String,
    coeffs: BTreeMap<usize, String>,
}

impl Serialize for Polynomial<BigRational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (basis, coeffs) = match self {
            Polynomial::Binomial(p) => (
                "binomial",
                p.terms().map(|(i, c)| (i, format_ratio(c))).collect(),
            ),
            Polynomial::Monomial(p) => (
                "monomial",
                p.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                    .map(|(i, c)| (i, format_ratio(c)))
                    .collect(),
            ),
        };
        PolynomialJson {
            basis: basis.to_string(),
            coeffs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial<BigRational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolynomialJson::deserialize(d)?;
        let mut terms = Vec::new();
        for (i, c) in raw.coeffs {
            let c =
                parse_ratio(&c).ok_or_else(|| D::Error::custom(format!("bad rational `{c}`")))?;
            terms.push((i, c));
        }
        match raw.basis.as_str() {
            "binomial" => Ok(Polynomial::Binomial(BinomialPoly::from_terms(terms))),
            "monomial" => {
                let n = terms.iter().map(|(i, _)| i + 1).max().unwrap_or(0);
                let mut v = vec![BigRational::from_integer(0.into()); n];
                for (i, c) in terms {
                    v[i] = c;
                }
                Ok(Polynomial::Monomial(MonomialPoly::from_vec(v)))
            }
            other => Err(D::Error::custom(format!("unknown basis `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::stirling2;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn qq(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn eval_modes() {
        let c2 = BinomialPoly::<Q>::basis(2);
        assert_eq!(c2.eval(&q(5), EvalBasis::Binomial), q(10));
        assert_eq!(c2.eval(&q(3), EvalBasis::Multiset), q(6));
        let c3 = BinomialPoly::<Q>::basis(3);
        assert_eq!(c3.eval(&q(2), EvalBasis::Binomial), q(0));
        assert_eq!(c2.eval(&qq(1, 2), EvalBasis::Binomial), qq(-1, 8));
        let z = BinomialPoly::<Q>::zero();
        assert_eq!(z.eval(&q(9), EvalBasis::Binomial), q(0));
    }

    #[test]
    fn cube_to_binomial() {
        let p = MonomialPoly::<Q>::power(3).to_binomial();
        assert_eq!(p, BinomialPoly::from_vec(vec![q(0), q(1), q(6), q(6)]));
        assert_eq!(p.to_string(), "C(x,1) + 6 C(x,2) + 6 C(x,3)");
        let p4 = MonomialPoly::<Q>::power(4).to_binomial();
        assert_eq!(
            p4,
            BinomialPoly::from_vec(vec![q(0), q(1), q(14), q(36), q(24)])
        );
    }

    #[test]
    fn binomial_to_monomial() {
        let m = BinomialPoly::<Q>::basis(2).to_monomial();
        assert_eq!(m, MonomialPoly::from_vec(vec![q(0), qq(-1, 2), qq(1, 2)]));
        assert_eq!(m.to_string(), "1/2 x^2 - 1/2 x");
    }

    #[test]
    fn power_coefficients_are_surjection_counts() {
        for n in 0..=8 {
            let b = MonomialPoly::<Q>::power(n).to_binomial();
            for k in 0..=n {
                let expected = crate::kernels::factorial(k as u64) * stirling2(n, k);
                assert_eq!(b.coeff(k), Q::from_integer(expected));
            }
        }
    }

    #[test]
    fn multiset_conversion() {
        // C(x + 1, 2) = C(x, 1) + C(x, 2)
        let ms = BinomialPoly::<Q>::basis(2);
        let b = BinomialPoly::from_multiset(&ms);
        assert_eq!(b, BinomialPoly::from_vec(vec![q(0), q(1), q(1)]));
        for x in -3..6 {
            assert_eq!(
                b.eval(&q(x), EvalBasis::Binomial),
                ms.eval(&q(x), EvalBasis::Multiset)
            );
        }
    }

    #[test]
    fn reflect_and_display() {
        let p = MonomialPoly::from_vec(vec![q(1), q(2), q(3)]);
        assert_eq!(p.reflect(), MonomialPoly::from_vec(vec![q(1), q(-2), q(3)]));
        assert_eq!(p.to_string(), "3 x^2 + 2 x + 1");
        assert_eq!(MonomialPoly::<Q>::zero().to_string(), "0");
        assert_eq!(
            MonomialPoly::<Q>::one_minus_x_pow(2),
            MonomialPoly::from_vec(vec![q(1), q(-2), q(1)])
        );
    }

    #[test]
    fn generic_over_f64() {
        let p = BinomialPoly::<f64>::from_vec(vec![0.0, 1.0, 6.0, 6.0]);
        assert_eq!(p.eval(&4.0, EvalBasis::Binomial), 64.0);
        let m = p.to_monomial();
        assert!((m.coeff(3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_form() {
        let p = Polynomial::Binomial(BinomialPoly::from_vec(vec![q(0), qq(1, 2), q(-3)]));
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(
            text,
            r#"{"basis":"binomial","coeffs":{"1":"1/2","2":"-3"}}"#
        );
        let back: Polynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let m = p.convert(Direction::ToMonomial);
        assert_eq!(m.convert(Direction::ToBinomial), p);
    }
}
