//! Counting order-preserving maps into chains, and the inclusion-exclusion
//! vector `d` of a poset.
//!
//! `d_i` is the number of strict order-preserving surjections from `P` onto
//! the chain of size `i`. The strict order polynomial is `sum d_i C(x, i)` and
//! the weak one is `sum (-1)^(|P|-i) d_i C(x+i-1, i)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::{BinomialPoly, MonomialPoly};
use crate::error::{Error, Result};
use crate::kernels::{binomial, factorial, stirling2};
use crate::poset::Poset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `x < y` implies `f(x) < f(y)`
    Strict,
    /// `x < y` implies `f(x) <= f(y)`
    Weak,
}

/// Limits on enumeration work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_elements: usize,
    pub max_value: usize,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            max_elements: 12,
            max_value: 64,
        }
    }
}

impl Guard {
    pub fn with_max_elements(max_elements: usize) -> Self {
        Guard {
            max_elements,
            ..Guard::default()
        }
    }

    pub fn check(&self, p: &Poset, n: usize) -> Result<()> {
        if p.len() > self.max_elements {
            return Err(Error::EnumerationGuard {
                what: "poset size",
                limit: self.max_elements,
                found: p.len(),
            });
        }
        if n > self.max_value {
            return Err(Error::EnumerationGuard {
                what: "chain length",
                limit: self.max_value,
                found: n,
            });
        }
        Ok(())
    }
}

/// Backtracking over a linear extension. The count below a position only
/// depends on the values of already-placed elements that still bound some
/// unplaced element, so those values key a memo table.
struct MapCounter<'a> {
    n: u16,
    strict: bool,
    /// For each position, the positions of its predecessors.
    preds: Vec<Vec<usize>>,
    /// For each position, the earlier positions still bounding later ones.
    frontier: Vec<Vec<usize>>,
    surjective: bool,
    memo: HashMap<(usize, Vec<u16>, u64), BigInt>,
    _poset: &'a Poset,
}

impl<'a> MapCounter<'a> {
    fn new(p: &'a Poset, n: usize, mode: Mode, surjective: bool) -> Self {
        let order = p.linear_extension();
        let mut position = vec![0; p.len()];
        for (pos, &e) in order.iter().enumerate() {
            position[e] = pos;
        }
        let preds = order
            .iter()
            .map(|&e| p.predecessors(e).map(|q| position[q]).collect())
            .collect();
        let frontier = (0..=order.len())
            .map(|pos| {
                (0..pos)
                    .filter(|&q| order[pos..].iter().any(|&later| p.less(order[q], later)))
                    .collect()
            })
            .collect();
        MapCounter {
            n: n as u16,
            strict: mode == Mode::Strict,
            preds,
            frontier,
            surjective,
            memo: HashMap::new(),
            _poset: p,
        }
    }

    fn count(&mut self) -> BigInt {
        let mut values = vec![0u16; self.preds.len()];
        self.descend(0, &mut values, 0)
    }

    fn descend(&mut self, pos: usize, values: &mut Vec<u16>, used: u64) -> BigInt {
        let len = self.preds.len();
        if self.surjective {
            let missing = self.n as u32 - used.count_ones();
            if missing as usize > len - pos {
                return BigInt::zero();
            }
        }
        if pos == len {
            return BigInt::one();
        }
        let key = (
            pos,
            self.frontier[pos]
                .iter()
                .map(|&q| values[q])
                .collect::<Vec<_>>(),
            used,
        );
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let floor = self.preds[pos]
            .iter()
            .map(|&q| values[q])
            .max()
            .unwrap_or(0);
        let low = if self.strict || floor == 0 {
            floor + 1
        } else {
            floor
        };
        let mut total = BigInt::zero();
        for v in low..=self.n {
            values[pos] = v;
            let next_used = if self.surjective {
                used | (1u64 << (v - 1))
            } else {
                0
            };
            total += self.descend(pos + 1, values, next_used);
        }
        values[pos] = 0;
        self.memo.insert(key, total.clone());
        total
    }
}

/// Number of order-preserving maps `P -> chain(n)`; one for the empty poset.
pub fn count_maps(p: &Poset, n: usize, mode: Mode, guard: &Guard) -> Result<BigInt> {
    guard.check(p, n)?;
    if p.is_empty() {
        return Ok(BigInt::one());
    }
    Ok(MapCounter::new(p, n, mode, false).count())
}

/// Number of strict order-preserving surjections `P -> chain(i)`, counted
/// directly rather than through inclusion-exclusion.
pub fn count_surjections(p: &Poset, i: usize, guard: &Guard) -> Result<BigInt> {
    guard.check(p, i)?;
    if i > 64 {
        return Err(Error::EnumerationGuard {
            what: "surjection target",
            limit: 64,
            found: i,
        });
    }
    if p.is_empty() {
        return Ok(if i == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        });
    }
    Ok(MapCounter::new(p, i, Mode::Strict, true).count())
}

/// The inclusion-exclusion vector of a poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DVector {
    pub poset: Poset,
    /// `d[i - 1]` is `d_i` for `1 <= i <= |P|`.
    pub d: Vec<BigInt>,
}

impl DVector {
    /// `d_i`, with `d_0 = 1` exactly for the empty poset.
    pub fn get(&self, i: usize) -> BigInt {
        match i {
            0 if self.poset.is_empty() => BigInt::one(),
            0 => BigInt::zero(),
            _ => self.d.get(i - 1).cloned().unwrap_or_default(),
        }
    }

    /// `(i, d_i)` over `0..=|P|`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, BigInt)> + '_ {
        (0..=self.poset.len()).map(|i| (i, self.get(i)))
    }

    pub fn linear_extensions(&self) -> BigInt {
        self.get(self.poset.len())
    }

    /// Simplex counts of the canonical triangulation, top dimension first.
    pub fn triangulation_summary(&self) -> String {
        let parts: Vec<String> = (1..=self.poset.len())
            .rev()
            .filter(|&i| !self.get(i).is_zero())
            .map(|i| format!("{} x simplex[{}]", self.get(i), i))
            .collect();
        if parts.is_empty() {
            "point".to_string()
        } else {
            parts.join(", ")
        }
    }
}

/// `d_i = sum_{j<=i} (-1)^(i-j) C(i, j) count_maps(P, j, strict)`.
pub fn d_vector(p: &Poset, guard: &Guard) -> Result<DVector> {
    let n = p.len();
    guard.check(p, n)?;
    let counts = (0..=n)
        .map(|j| count_maps(p, j, Mode::Strict, guard))
        .collect::<Result<Vec<_>>>()?;
    let d = (1..=n)
        .map(|i| {
            (0..=i).fold(BigInt::zero(), |acc, j| {
                let term = binomial(i as i64, j as u64) * &counts[j];
                if (i - j) % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect();
    Ok(DVector {
        poset: p.clone(),
        d,
    })
}

/// The same vector, one surjection count per entry.
pub fn d_vector_by_surjections(p: &Poset, guard: &Guard) -> Result<DVector> {
    let d = (1..=p.len())
        .map(|i| count_surjections(p, i, guard))
        .collect::<Result<Vec<_>>>()?;
    Ok(DVector {
        poset: p.clone(),
        d,
    })
}

fn sign(k: usize) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

impl DVector {
    /// `sum d_i C(x, i)`
    pub fn strict_polynomial(&self) -> BinomialPoly {
        BinomialPoly::from_terms(
            self.entries()
                .map(|(i, d)| (i, BigRational::from_integer(d))),
        )
    }

    /// `sum (-1)^(|P|-i) d_i C(x+i-1, i)`, re-expressed in the binomial basis.
    pub fn weak_polynomial(&self) -> BinomialPoly {
        BinomialPoly::from_multiset(&self.weak_multiset_coefficients())
    }

    /// The signed vector `(-1)^(|P|-i) d_i` over the multiset basis.
    pub fn weak_multiset_coefficients(&self) -> BinomialPoly {
        let n = self.poset.len();
        BinomialPoly::from_terms(
            self.entries()
                .map(|(i, d)| (i, BigRational::from_integer(sign(n - i) * d))),
        )
    }
}

pub fn order_polynomial(p: &Poset, mode: Mode, guard: &Guard) -> Result<BinomialPoly> {
    let d = d_vector(p, guard)?;
    Ok(match mode {
        Mode::Strict => d.strict_polynomial(),
        Mode::Weak => d.weak_polynomial(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocityReport {
    pub poset: Poset,
    /// Strict order polynomial from the inclusion-exclusion vector.
    pub strict: MonomialPoly,
    /// Weak order polynomial interpolated from weak map counts.
    pub weak: MonomialPoly,
    /// `(-1)^|P| strict(-x)`
    pub reflected: MonomialPoly,
    pub pass: bool,
}

/// Checks `(-1)^|P| strict(-x) = weak(x)` as a polynomial identity. The weak
/// side is interpolated from weak counts, independently of `d`.
pub fn reciprocity_check(p: &Poset, guard: &Guard) -> Result<ReciprocityReport> {
    let strict = order_polynomial(p, Mode::Strict, guard)?.to_monomial();
    let n = p.len();
    let mut diffs = (0..=n)
        .map(|j| count_maps(p, j, Mode::Weak, guard).map(BigRational::from_integer))
        .collect::<Result<Vec<_>>>()?;
    let mut newton = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        newton.push(diffs[0].clone());
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let weak = BinomialPoly::from_vec(newton).to_monomial();
    let mut reflected = strict.reflect();
    if n % 2 == 1 {
        reflected = reflected.scale(&-BigRational::one());
    }
    let pass = reflected == weak;
    Ok(ReciprocityReport {
        poset: p.clone(),
        strict,
        weak,
        reflected,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedSumReport {
    pub n: usize,
    pub k: usize,
    pub q: usize,
    /// `C(n + k - q, k)`
    pub binomial: BigInt,
    /// Count of `q <= i_1 <= ... <= i_k <= n` by direct iteration.
    pub nested: BigInt,
    /// Weak maps `chain(k) -> chain(n - q + 1)`.
    pub weak_maps: BigInt,
    pub pass: bool,
}

pub fn nested_sum_identity_check(n: usize, k: usize, q: usize) -> Result<NestedSumReport> {
    if q < 1 || q > n {
        return Err(Error::InvalidParameter(format!(
            "q = {q}; need 1 <= q <= n = {n}"
        )));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("k = 0; need k >= 1".into()));
    }
    fn iterate(depth: usize, low: usize, high: usize) -> BigInt {
        if depth == 0 {
            return BigInt::one();
        }
        (low..=high).map(|i| iterate(depth - 1, i, high)).sum()
    }
    let binomial = binomial((n + k - q) as i64, k as u64);
    let nested = iterate(k, q, n);
    let guard = Guard {
        max_elements: k.max(Guard::default().max_elements),
        max_value: n.max(Guard::default().max_value),
    };
    let weak_maps = count_maps(&Poset::chain(k), n - q + 1, Mode::Weak, &guard)?;
    let pass = binomial == nested && nested == weak_maps;
    Ok(NestedSumReport {
        n,
        k,
        q,
        binomial,
        nested,
        weak_maps,
        pass,
    })
}

/// Both sides of the strict = weak relation for `n` points, after clearing
/// the denominator `(1-x)^(n+1) / x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointsIdentityReport {
    pub n: usize,
    /// `sum_k k! S(n,k) x^(k-1) (1-x)^(n-k)`
    pub lhs: MonomialPoly,
    /// `sum_k (-1)^(n-k) k! S(n,k) (1-x)^(n-k)`
    pub derived_rhs: MonomialPoly,
    /// `sum_k (n-k)! S(n,n-k) (1-x)^k`, the unsigned form.
    pub unsigned_rhs: MonomialPoly,
    pub derived_holds: bool,
    pub unsigned_holds: bool,
}

pub fn points_identity(n: usize) -> PointsIdentityReport {
    let surj = |k: usize| BigRational::from_integer(factorial(k as u64) * stirling2(n, k));
    let mut lhs = MonomialPoly::zero();
    let mut derived_rhs = MonomialPoly::zero();
    let mut unsigned_rhs = MonomialPoly::zero();
    for k in 1..=n {
        let tail = MonomialPoly::one_minus_x_pow(n - k);
        lhs = &lhs + &(&MonomialPoly::power(k - 1) * &tail).scale(&surj(k));
        let signed = BigRational::from_integer(sign(n - k)) * surj(k);
        derived_rhs = &derived_rhs + &tail.scale(&signed);
        let c = BigRational::from_integer(factorial((n - k) as u64) * stirling2(n, n - k));
        unsigned_rhs = &unsigned_rhs + &MonomialPoly::one_minus_x_pow(k).scale(&c);
    }
    PointsIdentityReport {
        n,
        derived_holds: lhs == derived_rhs,
        unsigned_holds: lhs == unsigned_rhs,
        lhs,
        derived_rhs,
        unsigned_rhs,
    }
}

/// True when every entry of `d` is nonnegative.
pub fn is_nonnegative(d: &DVector) -> bool {
    d.d.iter().all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::EvalBasis;

    fn n_poset() -> Poset {
        Poset::new(["x", "y", "z", "w"], [("x", "y"), ("z", "y"), ("z", "w")]).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn star() -> Poset {
        Poset::chain(1).ordinal_sum(&Poset::antichain(3))
    }

    #[test]
    fn count_examples() {
        let g = Guard::default();
        for k in 0..5 {
            for n in 0..8 {
                assert_eq!(
                    count_maps(&Poset::chain(k), n, Mode::Strict, &g).unwrap(),
                    binomial(n as i64, k as u64)
                );
            }
        }
        assert_eq!(
            count_maps(&Poset::antichain(3), 2, Mode::Strict, &g).unwrap(),
            8.into()
        );
        assert_eq!(
            count_maps(&n_poset(), 3, Mode::Strict, &g).unwrap(),
            8.into()
        );
        assert_eq!(
            count_maps(&Poset::empty(), 5, Mode::Weak, &g).unwrap(),
            1.into()
        );
        assert_eq!(
            count_maps(&Poset::chain(2), 0, Mode::Weak, &g).unwrap(),
            0.into()
        );
    }

    #[test]
    fn guard_enforced() {
        let g = Guard::default();
        assert!(matches!(
            count_maps(&Poset::antichain(13), 2, Mode::Strict, &g),
            Err(Error::EnumerationGuard { found: 13, .. })
        ));
        assert!(matches!(
            count_maps(&Poset::chain(2), 65, Mode::Strict, &g),
            Err(Error::EnumerationGuard { found: 65, .. })
        ));
        // antichain(12) at the guard is fast thanks to the memo
        let c = count_maps(&Poset::antichain(12), 64, Mode::Weak, &g).unwrap();
        assert_eq!(c, num_traits::pow(BigInt::from(64), 12));
    }

    #[test]
    fn d_vector_examples() {
        let g = Guard::default();
        assert_eq!(d_vector(&n_poset(), &g).unwrap().d, ints(&[0, 1, 5, 5]));
        assert_eq!(
            d_vector(&Poset::antichain(4), &g).unwrap().d,
            ints(&[1, 14, 36, 24])
        );
        let pt = Poset::chain(1);
        let s = n_poset()
            .lex_sum(&[Poset::chain(2), pt.clone(), pt.clone(), pt])
            .unwrap();
        assert_eq!(d_vector(&s, &g).unwrap().d, ints(&[0, 0, 3, 11, 9]));
        assert_eq!(d_vector(&star(), &g).unwrap().d, ints(&[0, 1, 6, 6]));
        let e = d_vector(&Poset::empty(), &g).unwrap();
        assert!(e.d.is_empty());
        assert_eq!(e.get(0), BigInt::one());
    }

    #[test]
    fn surjections_agree() {
        let g = Guard::default();
        for p in [
            n_poset(),
            star(),
            Poset::antichain(4),
            Poset::chain(3),
            Poset::empty(),
        ] {
            assert_eq!(
                d_vector(&p, &g).unwrap(),
                d_vector_by_surjections(&p, &g).unwrap()
            );
        }
    }

    #[test]
    fn triangulation_summary_of_n_poset() {
        let d = d_vector(&n_poset(), &Guard::default()).unwrap();
        assert_eq!(
            d.triangulation_summary(),
            "5 x simplex[4], 5 x simplex[3], 1 x simplex[2]"
        );
        assert_eq!(d.linear_extensions(), 5.into());
    }

    #[test]
    fn polynomials() {
        let g = Guard::default();
        let q = |n: i64| BigRational::from_integer(n.into());
        let cube = order_polynomial(&Poset::antichain(3), Mode::Strict, &g).unwrap();
        assert_eq!(cube.to_monomial(), MonomialPoly::power(3));
        let s = order_polynomial(&star(), Mode::Strict, &g).unwrap();
        // (x^4 - 2x^3 + x^2) / 4
        let expected = MonomialPoly::from_vec(vec![q(0), q(0), q(1), q(-2), q(1)])
            .scale(&BigRational::new(1.into(), 4.into()));
        assert_eq!(s.to_monomial(), expected);
        let w = order_polynomial(&star(), Mode::Weak, &g).unwrap();
        // x^2 (x+1)^2 / 4
        let expected = MonomialPoly::from_vec(vec![q(0), q(0), q(1), q(2), q(1)])
            .scale(&BigRational::new(1.into(), 4.into()));
        assert_eq!(w.to_monomial(), expected);
        for k in 0..5 {
            let w = order_polynomial(&Poset::chain(k), Mode::Weak, &g).unwrap();
            for x in 0..8 {
                let direct = binomial((x + k as i64 - 1).max(0), k as u64);
                let direct = if x == 0 && k > 0 {
                    BigInt::zero()
                } else {
                    direct
                };
                assert_eq!(
                    w.eval(&q(x), EvalBasis::Binomial),
                    BigRational::from_integer(direct)
                );
            }
        }
        assert_eq!(
            order_polynomial(&Poset::empty(), Mode::Strict, &g).unwrap(),
            BinomialPoly::basis(0)
        );
    }

    #[test]
    fn reciprocity_examples() {
        let g = Guard::default();
        for p in [Poset::chain(2), n_poset(), star(), Poset::empty()] {
            assert!(reciprocity_check(&p, &g).unwrap().pass, "{p}");
        }
        for n in 0..=5 {
            let r = reciprocity_check(&Poset::antichain(n), &g).unwrap();
            assert!(r.pass);
            assert_eq!(r.weak, MonomialPoly::power(n));
        }
    }

    #[test]
    fn nested_sums() {
        let r = nested_sum_identity_check(4, 2, 2).unwrap();
        assert_eq!(r.binomial, 6.into());
        assert!(r.pass);
        let r = nested_sum_identity_check(3, 3, 3).unwrap();
        assert_eq!(r.nested, 1.into());
        assert!(r.pass);
        for n in 1..6 {
            for k in 1..4 {
                let r = nested_sum_identity_check(n, k, 1).unwrap();
                assert_eq!(r.binomial, binomial((n + k - 1) as i64, k as u64));
                assert!(r.pass);
            }
        }
        assert!(nested_sum_identity_check(3, 1, 0).is_err());
        assert!(nested_sum_identity_check(3, 1, 4).is_err());
        assert!(nested_sum_identity_check(3, 0, 1).is_err());
    }

    #[test]
    fn points_identity_sign() {
        for n in 1..=6 {
            let r = points_identity(n);
            assert!(r.derived_holds, "n = {n}");
        }
        assert!(!points_identity(2).unsigned_holds);
    }
}
