//! Named exact identities over order series, checked by the oracle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{binomial, eulerian_row};
use crate::order::{
    d_vector, nested_sum_identity_check, order_polynomial, points_identity, reciprocity_check,
    Guard, Mode,
};
use crate::poset::Poset;
use crate::series::{hadamard, ordinal_mul, series_of, SeriesVec};

/// Names accepted by [`series_identity_check`].
pub const IDENTITY_NAMES: &[&str] = &[
    "ordinal-hadamard-leibniz",
    "n-poset-reversal",
    "hstar-top-vanishing",
    "antichain-strict-weak",
    "n-poset-slot-formulas",
    "stanley-reciprocity",
    "nested-sum",
    "points-identity",
];

#[derive(Debug, Clone, Default)]
pub struct Params {
    pub values: BTreeMap<String, usize>,
    pub poset: Option<Poset>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, v: usize) -> Self {
        self.values.insert(key.to_string(), v);
        self
    }

    pub fn with_poset(mut self, p: Poset) -> Self {
        self.poset = Some(p);
        self
    }

    fn get(&self, key: &str) -> Result<usize> {
        self.values
            .get(key)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("missing parameter `{key}`")))
    }

    fn poset(&self) -> Result<&Poset> {
        self.poset
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("missing parameter `poset`".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesIdentityReport {
    pub name: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
    pub notes: Vec<String>,
}

impl SeriesIdentityReport {
    fn new(name: &str, lhs: impl ToString, rhs: impl ToString, pass: bool) -> Self {
        SeriesIdentityReport {
            name: name.to_string(),
            pass,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            notes: Vec::new(),
        }
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

pub fn series_identity_check(
    name: &str,
    params: &Params,
    guard: &Guard,
) -> Result<SeriesIdentityReport> {
    match name {
        "ordinal-hadamard-leibniz" => leibniz(params.get("s")?, params.get("p")?, params.get("q")?),
        "n-poset-reversal" => {
            let slots = [
                params.get("a")?,
                params.get("b")?,
                params.get("c")?,
                params.get("d")?,
            ];
            n_poset_reversal(slots, guard)
        }
        "hstar-top-vanishing" => hstar_top_vanishing(params.poset()?, guard),
        "antichain-strict-weak" => antichain_strict_weak(params.get("n")?, guard),
        "n-poset-slot-formulas" => n_poset_slot_formulas(params.get("k")?, guard),
        "stanley-reciprocity" => {
            let r = reciprocity_check(params.poset()?, guard)?;
            Ok(SeriesIdentityReport::new(
                name,
                &r.reflected,
                &r.weak,
                r.pass,
            ))
        }
        "nested-sum" => {
            let r =
                nested_sum_identity_check(params.get("n")?, params.get("k")?, params.get("q")?)?;
            Ok(SeriesIdentityReport::new(
                name,
                &r.nested,
                &r.binomial,
                r.pass,
            ))
        }
        "points-identity" => {
            let r = points_identity(params.get("n")?);
            let mut rep = SeriesIdentityReport::new(name, &r.lhs, &r.derived_rhs, r.derived_holds);
            if !r.unsigned_holds {
                rep = rep.note(format!(
                    "unsigned right-hand side {} differs",
                    r.unsigned_rhs
                ));
            }
            Ok(rep)
        }
        other => Err(Error::UnknownIdentity(other.to_string())),
    }
}

fn z(i: usize) -> SeriesVec {
    SeriesVec::basis(Mode::Strict, i)
}

/// `Z_s ⊔ (Z_p Z_q) = sum_{a+c=s} (Z_a⊔Z_p)(Z_c⊔Z_q) - [sum_{a+c=s-1} (Z_a⊔Z_p)(Z_c⊔Z_q)] Z_1`.
fn leibniz(s: usize, p: usize, q: usize) -> Result<SeriesIdentityReport> {
    let lhs = hadamard(&z(s), &ordinal_mul(&z(p), &z(q))?)?;
    let split = |total: usize| -> Result<SeriesVec> {
        let mut acc = SeriesVec::zero(Mode::Strict);
        for a in 0..=total {
            let left = hadamard(&z(a), &z(p))?;
            let right = hadamard(&z(total - a), &z(q))?;
            acc = acc.add(&ordinal_mul(&left, &right)?)?;
        }
        Ok(acc)
    };
    let mut rhs = split(s)?;
    if s >= 1 {
        rhs = rhs.sub(&ordinal_mul(&split(s - 1)?, &z(1))?)?;
    }
    let pass = lhs.same_coeffs(&rhs);
    Ok(SeriesIdentityReport::new(
        "ordinal-hadamard-leibniz",
        &lhs,
        &rhs,
        pass,
    ))
}

/// `{x<y>z<w}` with chains of the given sizes in its slots; size 0 is the
/// empty poset.
pub fn zigzag_with_chains(slots: [usize; 4], guard: &Guard) -> Result<SeriesVec> {
    let inner: Vec<Poset> = slots.iter().map(|&n| Poset::chain(n)).collect();
    series_of(&Poset::zigzag().lex_sum(&inner)?, Mode::Strict, guard)
}

/// The same value by structural constants when some slot is empty.
fn zigzag_degenerate([a, b, c, d]: [usize; 4]) -> Result<Option<SeriesVec>> {
    let s = if a == 0 {
        ordinal_mul(&z(c), &hadamard(&z(b), &z(d))?)?
    } else if b == 0 {
        hadamard(&z(a), &z(c + d))?
    } else if c == 0 {
        hadamard(&z(a + b), &z(d))?
    } else if d == 0 {
        ordinal_mul(&z(b), &hadamard(&z(a), &z(c))?)?
    } else {
        return Ok(None);
    };
    Ok(Some(s))
}

fn n_poset_reversal(slots: [usize; 4], guard: &Guard) -> Result<SeriesIdentityReport> {
    let mut rev = slots;
    rev.reverse();
    let lhs = zigzag_with_chains(slots, guard)?;
    let rhs = zigzag_with_chains(rev, guard)?;
    let mut pass = lhs.same_coeffs(&rhs);
    let mut notes = Vec::new();
    for (tuple, value) in [(slots, &lhs), (rev, &rhs)] {
        if let Some(deg) = zigzag_degenerate(tuple)? {
            let ok = deg.same_coeffs(value);
            pass &= ok;
            notes.push(format!(
                "{tuple:?}: empty-slot formula gives {deg} ({})",
                if ok { "agrees" } else { "disagrees" }
            ));
        }
    }
    let mut rep = SeriesIdentityReport::new("n-poset-reversal", &lhs, &rhs, pass);
    rep.notes = notes;
    Ok(rep)
}

/// The weak series of a nonempty poset has h* of degree below `|P|`, and
/// `h*(1)` counts linear extensions.
fn hstar_top_vanishing(p: &Poset, guard: &Guard) -> Result<SeriesIdentityReport> {
    if p.is_empty() {
        return Err(Error::InvalidParameter("needs a nonempty poset".into()));
    }
    let n = p.len();
    let cf = series_of(p, Mode::Weak, guard)?.closed_form();
    let d = d_vector(p, guard)?;
    let h = cf.h_star();
    let (top_ok, sum_ok) = match &h {
        Some(h) => {
            let total: BigRational = h.coeffs().iter().cloned().sum();
            (
                cf.den_power == n + 1 && h.degree().is_none_or(|k| k < n),
                total == BigRational::from_integer(d.linear_extensions()),
            )
        }
        None => (false, false),
    };
    let shown = h
        .as_ref()
        .map_or_else(|| "none".to_string(), |h| h.to_string());
    let mut rep = SeriesIdentityReport::new(
        "hstar-top-vanishing",
        format!("h* = {shown}"),
        format!("degree < {n}, h*(1) = {}", d.linear_extensions()),
        top_ok && sum_ok,
    );
    if let (Some(h), true) = (&h, p.same_shape(&Poset::antichain(n))) {
        let eul: Vec<BigRational> = eulerian_row(n)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let ok = h.coeffs() == eul.as_slice();
        rep.pass &= ok;
        rep = rep.note(format!(
            "antichain: h* {} the Eulerian row",
            if ok { "equals" } else { "differs from" }
        ));
    }
    Ok(rep)
}

fn antichain_strict_weak(n: usize, guard: &Guard) -> Result<SeriesIdentityReport> {
    let p = Poset::antichain(n);
    let strict = order_polynomial(&p, Mode::Strict, guard)?;
    let weak = order_polynomial(&p, Mode::Weak, guard)?;
    let power = crate::basis::MonomialPoly::power(n);
    let pass = strict == weak && strict.to_monomial() == power;
    Ok(SeriesIdentityReport::new(
        "antichain-strict-weak",
        strict.to_monomial(),
        weak.to_monomial(),
        pass,
    ))
}

fn int(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Closed forms of one chain slot of size `k` in `{x<y>z<w}` with points elsewhere:
///
/// `N(k,1,1,1) = ((k+1)(k+4)/2) Z_(k+3) + (C(k+2,2) + k(k+3)/2) Z_(k+2) + C(k+1,2) Z_(k+1)`
/// `N(1,k,1,1) = (2k+3) Z_(k+3) + (3k+2) Z_(k+2) + k Z_(k+1)`
pub fn zigzag_slot_formulas(k: usize) -> (SeriesVec, SeriesVec) {
    let ki = k as i64;
    let half = |v: i64| BigRational::new(v.into(), 2.into());
    let first = SeriesVec::from_terms(
        Mode::Strict,
        [
            (k + 3, half((ki + 1) * (ki + 4))),
            (k + 2, int(binomial(ki + 2, 2)) + half(ki * (ki + 3))),
            (k + 1, int(binomial(ki + 1, 2))),
        ],
    );
    let second = SeriesVec::from_terms(
        Mode::Strict,
        [
            (k + 3, int((2 * ki + 3).into())),
            (k + 2, int((3 * ki + 2).into())),
            (k + 1, int(ki.into())),
        ],
    );
    (first, second)
}

fn n_poset_slot_formulas(k: usize, guard: &Guard) -> Result<SeriesIdentityReport> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "slot size must be at least 1".into(),
        ));
    }
    let (f1, f2) = zigzag_slot_formulas(k);
    let o1 = zigzag_with_chains([k, 1, 1, 1], guard)?;
    let o2 = zigzag_with_chains([1, k, 1, 1], guard)?;
    let pass = f1.same_coeffs(&o1) && f2.same_coeffs(&o2);
    Ok(SeriesIdentityReport::new(
        "n-poset-slot-formulas",
        format!("{f1}; {f2}"),
        format!("{o1}; {o2}"),
        pass,
    ))
}

/// Whether `s` is the series of some poset in `candidates`.
pub fn realized_by(s: &SeriesVec, candidates: &[Poset], guard: &Guard) -> Result<Option<Poset>> {
    for p in candidates {
        if series_of(p, Mode::Strict, guard)?.same_coeffs(s) {
            return Ok(Some(p.clone()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> Guard {
        Guard::default()
    }

    #[test]
    fn leibniz_small() {
        let r = leibniz(1, 1, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, "2 Z_2 + 3 Z_3");
        for s in 0..4 {
            for p in 0..4 {
                for q in 0..4 {
                    assert!(leibniz(s, p, q).unwrap().pass, "{s} {p} {q}");
                }
            }
        }
    }

    #[test]
    fn reversal_pairs() {
        let a = zigzag_with_chains([1, 2, 1, 1], &g()).unwrap();
        let b = zigzag_with_chains([1, 1, 2, 1], &g()).unwrap();
        let c = zigzag_with_chains([2, 1, 1, 1], &g()).unwrap();
        assert!(a.same_coeffs(&b));
        assert!(!a.same_coeffs(&c));
        assert_eq!(c.to_string(), "3 Z_3 + 11 Z_4 + 9 Z_5");
        assert_eq!(a.to_string(), "2 Z_3 + 8 Z_4 + 7 Z_5");
        for t in [
            [0, 1, 2, 1],
            [1, 0, 2, 2],
            [2, 1, 0, 1],
            [1, 2, 3, 0],
            [0, 0, 1, 1],
        ] {
            let r = series_identity_check(
                "n-poset-reversal",
                &Params::new()
                    .with("a", t[0])
                    .with("b", t[1])
                    .with("c", t[2])
                    .with("d", t[3]),
                &g(),
            )
            .unwrap();
            assert!(r.pass, "{t:?} {:?}", r.notes);
            assert_eq!(r.notes.len(), 2);
        }
    }

    #[test]
    fn hstar() {
        let r = hstar_top_vanishing(&Poset::antichain(3), &g()).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, "h* = x^2 + 4 x + 1");
        assert!(hstar_top_vanishing(&Poset::zigzag(), &g()).unwrap().pass);
        assert!(hstar_top_vanishing(&Poset::empty(), &g()).is_err());
    }

    #[test]
    fn slot_formulas() {
        for k in 1..=5 {
            assert!(n_poset_slot_formulas(k, &g()).unwrap().pass, "k = {k}");
        }
    }

    #[test]
    fn dispatch() {
        let r = series_identity_check("antichain-strict-weak", &Params::new().with("n", 4), &g())
            .unwrap();
        assert!(r.pass);
        assert_eq!(
            series_identity_check("nope", &Params::new(), &g()),
            Err(Error::UnknownIdentity("nope".into()))
        );
        assert!(matches!(
            series_identity_check("nested-sum", &Params::new(), &g()),
            Err(Error::InvalidParameter(_))
        ));
        let r =
            series_identity_check("points-identity", &Params::new().with("n", 3), &g()).unwrap();
        assert!(r.pass);
        assert_eq!(r.notes.len(), 1);
    }
}
