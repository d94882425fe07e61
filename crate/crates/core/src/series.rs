//! Order series stored over the inclusion-exclusion basis.
//!
//! Strict basis: `Z_i = x^i / (1-x)^(i+1) = sum_n C(n, i) x^n`.
//! Weak basis: `Z+_i = x / (1-x)^(i+1) = sum_{n>=1} C(n+i-1, i) x^n`.
//! Index 0 holds the units `1/(1-x)` and `x/(1-x)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::MonomialPoly;
use crate::error::{Error, Result};
use crate::kernels::binomial;
use crate::order::{d_vector, Guard, Mode};
use crate::poset::Poset;
use crate::scalar::{format_ratio, parse_ratio, Scalar};

#[derive(Clone, PartialEq)]
pub struct SeriesVec<T: Scalar = BigRational> {
    pub mode: Mode,
    coeffs: BTreeMap<usize, T>,
    pub provenance: Option<Poset>,
}

impl<T: Scalar> SeriesVec<T> {
    pub fn zero(mode: Mode) -> Self {
        SeriesVec {
            mode,
            coeffs: BTreeMap::new(),
            provenance: None,
        }
    }

    /// A single basis element, `Z_i` or `Z+_i`.
    pub fn basis(mode: Mode, i: usize) -> Self {
        Self::from_terms(mode, [(i, T::one())])
    }

    /// The unit `Z_0`, i.e. the series of the empty poset.
    pub fn unit() -> Self {
        Self::basis(Mode::Strict, 0).with_provenance(Poset::empty())
    }

    /// `Z_k` with the chain of size `k` attached as provenance.
    pub fn chain(k: usize) -> Self {
        Self::basis(Mode::Strict, k).with_provenance(Poset::chain(k))
    }

    pub fn from_terms(mode: Mode, terms: impl IntoIterator<Item = (usize, T)>) -> Self {
        let mut s = Self::zero(mode);
        for (i, c) in terms {
            s.add_term(i, c);
        }
        s
    }

    pub fn with_provenance(mut self, p: Poset) -> Self {
        self.provenance = Some(p);
        self
    }

    pub fn without_provenance(mut self) -> Self {
        self.provenance = None;
        self
    }

    fn add_term(&mut self, i: usize, c: T) {
        let sum = self.coeffs.remove(&i).unwrap_or_else(T::zero) + c;
        if !sum.is_zero() {
            self.coeffs.insert(i, sum);
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

    pub fn max_index(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::from_terms(
            self.mode,
            self.terms().map(|(i, c)| (i, c.clone() * k.clone())),
        )
    }

    /// Sum of two series of the same mode; provenance is dropped.
    pub fn add(&self, other: &Self) -> Result<Self> {
        same_mode(self, other)?;
        let mut out = Self::zero(self.mode);
        for (i, c) in self.terms().chain(other.terms()) {
            out.add_term(i, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    /// Coefficients equal, provenance ignored.
    pub fn same_coeffs(&self, other: &Self) -> bool {
        self.mode == other.mode && self.coeffs == other.coeffs
    }

    /// Power series coefficients of `x^0 .. x^(n-1)`.
    pub fn expand(&self, n: usize) -> Vec<T> {
        (0..n)
            .map(|m| {
                self.terms().fold(T::zero(), |acc, (i, c)| {
                    let b = match self.mode {
                        Mode::Strict => binomial(m as i64, i as u64),
                        Mode::Weak if m == 0 => BigInt::zero(),
                        Mode::Weak => binomial((m + i - 1) as i64, i as u64),
                    };
                    acc + c.clone() * T::from_bigint(&b)
                })
            })
            .collect()
    }

    /// Numerator over the common denominator `(1-x)^(max + 1)`.
    pub fn closed_form(&self) -> ClosedForm<T> {
        let Some(top) = self.max_index() else {
            return ClosedForm {
                numerator: MonomialPoly::zero(),
                den_power: 1,
            };
        };
        let mut numerator = MonomialPoly::zero();
        for (i, c) in self.terms() {
            let lead = match self.mode {
                Mode::Strict => MonomialPoly::power(i),
                Mode::Weak => MonomialPoly::power(1),
            };
            let term = (&lead * &MonomialPoly::one_minus_x_pow(top - i)).scale(c);
            numerator = &numerator + &term;
        }
        ClosedForm {
            numerator,
            den_power: top + 1,
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SeriesVec<U> {
        SeriesVec {
            mode: self.mode,
            coeffs: self
                .terms()
                .map(|(i, c)| (i, f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
            provenance: self.provenance.clone(),
        }
    }
}

fn same_mode<T: Scalar>(a: &SeriesVec<T>, b: &SeriesVec<T>) -> Result<()> {
    if a.mode != b.mode {
        return Err(Error::ModeMismatch(format!(
            "cannot combine {:?} and {:?} series",
            a.mode, b.mode
        )));
    }
    Ok(())
}

fn require_strict<T: Scalar>(s: &SeriesVec<T>, op: &str) -> Result<()> {
    if s.mode != Mode::Strict {
        return Err(Error::ModeMismatch(format!(
            "{op} is defined on strict series; map weak series through iota first"
        )));
    }
    Ok(())
}

/// `numerator / (1-x)^den_power`
#[derive(Clone, PartialEq)]
pub struct ClosedForm<T: Scalar = BigRational> {
    pub numerator: MonomialPoly<T>,
    pub den_power: usize,
}

impl<T: Scalar + fmt::Display> fmt::Display for ClosedForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / (1 - x)^{}", self.numerator, self.den_power)
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for ClosedForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClosedForm({self})")
    }
}

impl ClosedForm<BigRational> {
    /// The numerator divided by `x`, for weak series of nonempty posets this
    /// is the h* polynomial of the order polytope.
    pub fn h_star(&self) -> Option<MonomialPoly> {
        let c = self.numerator.coeffs();
        if c.first().is_some_and(|c0| !c0.is_zero()) {
            return None;
        }
        Some(MonomialPoly::from_vec(c.iter().skip(1).cloned().collect()))
    }
}

/// The order series of `P`: the d-vector (strict) or its signed form (weak).
pub fn series_of(p: &Poset, mode: Mode, guard: &Guard) -> Result<SeriesVec> {
    let d = d_vector(p, guard)?;
    let n = p.len();
    let terms = d.entries().map(|(i, v)| {
        let v = BigRational::from_integer(v);
        match mode {
            Mode::Weak if (n - i) % 2 == 1 => (i, -v),
            _ => (i, v),
        }
    });
    Ok(SeriesVec::from_terms(mode, terms).with_provenance(p.clone()))
}

/// Structural constants of `Z_n ⊔ Z_s`: `sum_{j<=s} C(n+j, s) C(s, j) Z_(n+j)`
/// for `s <= n`.
pub fn hadamard_constants(n: usize, s: usize) -> Vec<(usize, BigInt)> {
    let (n, s) = if s > n { (s, n) } else { (n, s) };
    (0..=s)
        .map(|j| {
            (
                n + j,
                binomial((n + j) as i64, s as u64) * binomial(s as i64, j as u64),
            )
        })
        .collect()
}

/// Coefficient-wise product of power series, i.e. disjoint union of posets.
pub fn hadamard<T: Scalar>(a: &SeriesVec<T>, b: &SeriesVec<T>) -> Result<SeriesVec<T>> {
    require_strict(a, "hadamard")?;
    require_strict(b, "hadamard")?;
    let mut out = SeriesVec::zero(Mode::Strict);
    for (n, ca) in a.terms() {
        for (s, cb) in b.terms() {
            let c = ca.clone() * cb.clone();
            for (k, m) in hadamard_constants(n, s) {
                out.add_term(k, c.clone() * T::from_bigint(&m));
            }
        }
    }
    if let (Some(p), Some(q)) = (&a.provenance, &b.provenance) {
        out.provenance = Some(p.disjoint_union(q));
    }
    Ok(out)
}

/// `a * (1-x) * b`, i.e. ordinal sum of posets: `Z_a Z_b -> Z_(a+b)`.
pub fn ordinal_mul<T: Scalar>(a: &SeriesVec<T>, b: &SeriesVec<T>) -> Result<SeriesVec<T>> {
    require_strict(a, "ordinal product")?;
    require_strict(b, "ordinal product")?;
    let mut out = SeriesVec::zero(Mode::Strict);
    for (i, ca) in a.terms() {
        for (j, cb) in b.terms() {
            out.add_term(i + j, ca.clone() * cb.clone());
        }
    }
    if let (Some(p), Some(q)) = (&a.provenance, &b.provenance) {
        out.provenance = Some(p.ordinal_sum(q));
    }
    Ok(out)
}

/// Exchanges strict and weak forms: `c_i -> (-1)^(|P|-i) c_i`. Needs the
/// generating poset for `|P|`.
pub fn iota<T: Scalar>(s: &SeriesVec<T>) -> Result<SeriesVec<T>> {
    let p = s.provenance.as_ref().ok_or(Error::MissingProvenance)?;
    let n = p.len();
    let mode = match s.mode {
        Mode::Strict => Mode::Weak,
        Mode::Weak => Mode::Strict,
    };
    let terms = s.terms().map(|(i, c)| {
        if (n + i) % 2 == 1 {
            (i, -c.clone())
        } else {
            (i, c.clone())
        }
    });
    Ok(SeriesVec::from_terms(mode, terms).with_provenance(p.clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalPath {
    /// Every argument carried its generating poset.
    Exact,
    /// Chain-slot action extended linearly over the basis.
    Multilinear,
}

impl EvalPath {
    pub fn describe(self) -> &'static str {
        match self {
            EvalPath::Exact => "exact (lexicographic sum of generating posets)",
            EvalPath::Multilinear => "multilinear (conjectural extension)",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperadEval {
    pub result: SeriesVec,
    pub path: EvalPath,
    /// Both paths were computed and compared.
    pub cross_checked: bool,
    /// The two paths disagreed; `result` is the exact one.
    pub flagged: bool,
    pub multilinear: SeriesVec,
}

/// Memoized chain-slot action `P(Z_n1, ..., Z_nk)`.
pub struct ChainAction<'a> {
    outer: &'a Poset,
    guard: Guard,
    cache: HashMap<Vec<usize>, SeriesVec>,
}

impl<'a> ChainAction<'a> {
    pub fn new(outer: &'a Poset, guard: Guard) -> Self {
        ChainAction {
            outer,
            guard,
            cache: HashMap::new(),
        }
    }

    pub fn eval(&mut self, lengths: &[usize]) -> Result<SeriesVec> {
        if let Some(hit) = self.cache.get(lengths) {
            return Ok(hit.clone());
        }
        let inner: Vec<Poset> = lengths.iter().map(|&n| Poset::chain(n)).collect();
        let composed = self.outer.lex_sum(&inner)?;
        let s = series_of(&composed, Mode::Strict, &self.guard)?;
        self.cache.insert(lengths.to_vec(), s.clone());
        Ok(s)
    }

    /// Multilinear extension over arbitrary strict arguments.
    pub fn eval_linear(&mut self, args: &[SeriesVec]) -> Result<SeriesVec> {
        let mut out = SeriesVec::zero(Mode::Strict);
        let expanded: Vec<Vec<(usize, BigRational)>> = args
            .iter()
            .map(|a| a.terms().map(|(i, c)| (i, c.clone())).collect())
            .collect();
        if expanded.iter().any(Vec::is_empty) {
            return Ok(out);
        }
        let mut pick = vec![0usize; args.len()];
        loop {
            let lengths: Vec<usize> = pick.iter().zip(&expanded).map(|(&k, e)| e[k].0).collect();
            let weight = pick
                .iter()
                .zip(&expanded)
                .fold(BigRational::one(), |acc, (&k, e)| acc * &e[k].1);
            for (i, c) in self.eval(&lengths)?.terms() {
                out.add_term(i, c * &weight);
            }
            // odometer over the tuple of picked terms
            let mut slot = 0;
            loop {
                if slot == pick.len() {
                    return Ok(out);
                }
                pick[slot] += 1;
                if pick[slot] < expanded[slot].len() {
                    break;
                }
                pick[slot] = 0;
                slot += 1;
            }
        }
    }
}

/// The action of `P` on strict order series. Exact when every argument has a
/// generating poset; the multilinear path is always computed and compared.
pub fn operad_eval_series(p: &Poset, args: &[SeriesVec], guard: &Guard) -> Result<OperadEval> {
    if args.len() != p.len() {
        return Err(Error::ArityMismatch {
            expected: p.len(),
            found: args.len(),
        });
    }
    for a in args {
        require_strict(a, "operad evaluation")?;
    }
    let multilinear = ChainAction::new(p, *guard).eval_linear(args)?;
    let provs: Option<Vec<Poset>> = args.iter().map(|a| a.provenance.clone()).collect();
    match provs {
        Some(inner) => {
            let exact = series_of(&p.lex_sum(&inner)?, Mode::Strict, guard)?;
            let flagged = !exact.same_coeffs(&multilinear);
            Ok(OperadEval {
                result: exact,
                path: EvalPath::Exact,
                cross_checked: true,
                flagged,
                multilinear,
            })
        }
        None => Ok(OperadEval {
            result: multilinear.clone(),
            path: EvalPath::Multilinear,
            cross_checked: false,
            flagged: false,
            multilinear,
        }),
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for SeriesVec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let symbol = match self.mode {
            Mode::Strict => "Z",
            Mode::Weak => "Z+",
        };
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (i, c)) in self.terms().enumerate() {
            let (neg, abs) = if c.is_negative() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs} ")?;
            }
            write!(f, "{symbol}_{i}")?;
        }
        Ok(())
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for SeriesVec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SeriesVec({self})")
    }
}

impl Serialize for ClosedForm<BigRational> {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            numerator: Vec<String>,
            den_power: usize,
        }
        Wire {
            numerator: self.numerator.coeffs().iter().map(format_ratio).collect(),
            den_power: self.den_power,
        }
        .serialize(serializer)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    mode: Mode,
    coeffs: BTreeMap<String, String>,
    provenance: Option<Poset>,
}

impl Serialize for SeriesVec {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            mode: self.mode,
            coeffs: self
                .terms()
                .map(|(i, c)| (i.to_string(), format_ratio(c)))
                .collect(),
            provenance: self.provenance.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SeriesVec {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SeriesJson::deserialize(deserializer)?;
        let mut s = SeriesVec::zero(raw.mode);
        for (k, v) in raw.coeffs {
            let i: usize = k.parse().map_err(D::Error::custom)?;
            let c =
                parse_ratio(&v).ok_or_else(|| D::Error::custom(format!("bad rational `{v}`")))?;
            s.add_term(i, c);
        }
        s.provenance = raw.provenance;
        Ok(s)
    }
}
