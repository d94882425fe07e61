//! Exact rational combinations of zeta values.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::BinomialPoly;
use crate::scalar::{format_ratio, parse_ratio};

/// `constant + sum_k coeffs[k] * zeta(k + 1)` with `k >= 1`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ZetaExpr {
    pub constant: BigRational,
    coeffs: BTreeMap<usize, BigRational>,
}

/// `1 + 2^-s`, the rational part removed by the shifted basis.
pub(crate) fn shift_constant(s: usize) -> BigRational {
    BigRational::one() + BigRational::new(BigInt::one(), BigInt::one() << s)
}

impl ZetaExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(c: BigRational) -> Self {
        ZetaExpr {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    /// `zeta(k + 1)` for `k >= 1`.
    pub fn zeta(k: usize) -> Self {
        assert!(k >= 1, "zeta(1) diverges");
        let mut e = Self::zero();
        e.add_zeta(k, BigRational::one());
        e
    }

    /// `zeta(k + 1) - 1 - 2^-(k+1)`, written `zhat_k`.
    pub fn shifted(k: usize) -> Self {
        let mut e = Self::zeta(k);
        e.constant = -shift_constant(k + 1);
        e
    }

    pub fn add_zeta(&mut self, k: usize, c: BigRational) {
        let sum = self.coeffs.remove(&k).unwrap_or_default() + c;
        if !sum.is_zero() {
            self.coeffs.insert(k, sum);
        }
    }

    /// Coefficient of `zeta(k + 1)`.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn zeta_terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::rational(&self.constant * k);
        for (i, c) in self.zeta_terms() {
            out.add_zeta(i, c * k);
        }
        out
    }

    /// Highest `k` with a nonzero `zeta(k + 1)` coefficient.
    pub fn max_index(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    /// Constant left over after writing the zeta part in the shifted basis:
    /// `self = sum c_k zhat_k + shifted_constant()`.
    pub fn shifted_constant(&self) -> BigRational {
        self.zeta_terms()
            .fold(self.constant.clone(), |acc, (k, c)| {
                acc + c * shift_constant(k + 1)
            })
    }

    /// Rendering over `zeta(k+1) - 1 - 2^-(k+1)`.
    pub fn display_shifted(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.zeta_terms() {
            let s = k + 1;
            let unit = format!("(zeta({s}) - {})", format_ratio(&shift_constant(s)));
            parts.push(term(c, &unit));
        }
        let rest = self.shifted_constant();
        if !rest.is_zero() || parts.is_empty() {
            parts.push((rest.is_negative(), format_ratio(&rest.abs())));
        }
        join_signed(&parts)
    }
}

fn term(c: &BigRational, unit: &str) -> (bool, String) {
    let abs = c.abs();
    let body = if abs.is_one() {
        unit.to_string()
    } else {
        format!("{} {unit}", format_ratio(&abs))
    };
    (c.is_negative(), body)
}

fn join_signed(parts: &[(bool, String)]) -> String {
    let mut out = String::new();
    for (n, (neg, body)) in parts.iter().enumerate() {
        match (n, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(body);
    }
    out
}

impl std::ops::Add for &ZetaExpr {
    type Output = ZetaExpr;
    fn add(self, rhs: &ZetaExpr) -> ZetaExpr {
        let mut out = self.clone();
        out.constant += &rhs.constant;
        for (k, c) in rhs.zeta_terms() {
            out.add_zeta(k, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &ZetaExpr {
    type Output = ZetaExpr;
    fn sub(self, rhs: &ZetaExpr) -> ZetaExpr {
        self + &rhs.scale(&-BigRational::one())
    }
}

impl fmt::Display for ZetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = self
            .zeta_terms()
            .map(|(k, c)| term(c, &format!("zeta({})", k + 1)))
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push((
                self.constant.is_negative(),
                format_ratio(&self.constant.abs()),
            ));
        }
        f.write_str(&join_signed(&parts))
    }
}

impl fmt::Debug for ZetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZetaExpr({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct ZetaJson {
    constant: String,
    zeta_coeffs: BTreeMap<String, String>,
}

impl Serialize for ZetaExpr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ZetaJson {
            constant: format_ratio(&self.constant),
            zeta_coeffs: self
                .zeta_terms()
                .map(|(k, c)| (k.to_string(), format_ratio(c)))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ZetaExpr {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ZetaJson::deserialize(deserializer)?;
        let ratio =
            |s: &str| parse_ratio(s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")));
        let mut e = ZetaExpr::rational(ratio(&raw.constant)?);
        for (k, c) in raw.zeta_coeffs {
            let k: usize = k.parse().map_err(D::Error::custom)?;
            if k == 0 {
                return Err(D::Error::custom("zeta(1) is not allowed"));
            }
            e.add_zeta(k, ratio(&c)?);
        }
        Ok(e)
    }
}

/// `C(x, k) -> zeta(k + 1)` for `k >= 1`, `C(x, 0) -> 1`.
pub fn n_tilde(p: &BinomialPoly) -> ZetaExpr {
    let mut out = ZetaExpr::zero();
    for (k, c) in p.terms() {
        if k == 0 {
            out.constant += c;
        } else {
            out.add_zeta(k, c.clone());
        }
    }
    out
}

/// `C(x, k) -> (-1)^(k+1) (zeta(k+1) - 1 - 2^-(k+1))` for `k >= 1`,
/// `C(x, 0) -> 1/2`.
pub fn n_tilde2(p: &BinomialPoly) -> ZetaExpr {
    let mut out = ZetaExpr::zero();
    for (k, c) in p.terms() {
        if k == 0 {
            out.constant += c / BigRational::from_integer(2.into());
        } else {
            let signed = if k % 2 == 1 { c.clone() } else { -c.clone() };
            out = &out + &ZetaExpr::shifted(k).scale(&signed);
        }
    }
    out
}
