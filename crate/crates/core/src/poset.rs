//! Finite posets and their lexicographic-sum composition.
//!
//! A [`Poset`] is an immutable, transitively closed strict order on a list of
//! labels. The order of the label list is significant: it is the slot order
//! used when the poset acts as an operation in [`Poset::lex_sum`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PosetJson", into = "PosetJson")]
pub struct Poset {
    labels: Vec<String>,
    /// `less[i][j]` iff `labels[i] < labels[j]`; always transitively closed.
    less: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CanonicalKind {
    Chain,
    Antichain,
}

impl Poset {
    /// Builds a poset from labels and generating pairs `(a, b)` meaning `a < b`.
    pub fn new<L, A, B>(labels: L, covers: impl IntoIterator<Item = (A, B)>) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let lookup = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let mut pairs = Vec::new();
        for (a, b) in covers {
            pairs.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_pairs(labels, &pairs)
    }

    /// Builds a poset from index pairs into `labels`; labels must be distinct.
    pub fn from_pairs(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut less = vec![vec![false; n]; n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange {
                    what: format!("pair ({a}, {b}) on {n} elements"),
                });
            }
            less[a][b] = true;
        }
        close(&mut less);
        if let Some(i) = (0..n).find(|&i| less[i][i]) {
            return Err(Error::CycleDetected(labels[i].clone()));
        }
        Ok(Poset { labels, less })
    }

    pub fn empty() -> Self {
        Poset {
            labels: Vec::new(),
            less: Vec::new(),
        }
    }

    /// `1 < 2 < ... < n`.
    pub fn chain(n: usize) -> Self {
        let less = (0..n).map(|i| (0..n).map(|j| i < j).collect()).collect();
        Poset {
            labels: numbered(n),
            less,
        }
    }

    pub fn antichain(n: usize) -> Self {
        Poset {
            labels: numbered(n),
            less: vec![vec![false; n]; n],
        }
    }

    /// `{x<y>z<w}`: `x < y`, `z < y`, `z < w`.
    pub fn zigzag() -> Self {
        Poset::new(["x", "y", "z", "w"], [("x", "y"), ("z", "y"), ("z", "w")])
            .expect("valid literal")
    }

    pub fn canonical(kind: CanonicalKind, n: usize) -> Self {
        match kind {
            CanonicalKind::Chain => Self::chain(n),
            CanonicalKind::Antichain => Self::antichain(n),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn less(&self, i: usize, j: usize) -> bool {
        self.less[i][j]
    }

    /// All pairs of the (closed) relation, in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.less[i][j])
            .collect()
    }

    /// The transitive reduction (Hasse diagram edges), in row-major order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        self.pairs()
            .into_iter()
            .filter(|&(i, j)| !(0..n).any(|k| self.less[i][k] && self.less[k][j]))
            .collect()
    }

    pub fn predecessors(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.less[i][j])
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.less[i][j])
    }

    /// A linear extension, preferring earlier slots among available minima.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut indegree: Vec<usize> = (0..n).map(|j| self.predecessors(j).count()).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for j in self.successors(i) {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.insert(j);
                }
            }
        }
        order
    }

    /// Size of the longest totally ordered subset.
    pub fn max_chain_length(&self) -> usize {
        let weights = vec![1u64; self.len()];
        self.longest_weighted_chain(&weights) as usize
    }

    /// Tropical evaluation: the longest chain of the lexicographic sum over
    /// chains of the given lengths, i.e. the heaviest chain of `self` when
    /// each element weighs its length.
    pub fn tropical_eval(&self, lengths: &[u64]) -> Result<u64> {
        self.check_arity(lengths.len())?;
        Ok(self.longest_weighted_chain(lengths))
    }

    fn longest_weighted_chain(&self, weights: &[u64]) -> u64 {
        let mut best = vec![0u64; self.len()];
        for j in self.linear_extension() {
            let below = self.predecessors(j).map(|i| best[i]).max().unwrap_or(0);
            best[j] = below + weights[j];
        }
        best.into_iter().max().unwrap_or(0)
    }

    fn check_arity(&self, found: usize) -> Result<()> {
        if found != self.len() {
            return Err(Error::ArityMismatch {
                expected: self.len(),
                found,
            });
        }
        Ok(())
    }

    /// Substitutes `inner[i]` for the `i`-th element of `self`.
    ///
    /// `a < b` in the result iff both lie in one block and are related there,
    /// or they lie in blocks whose slots are related in `self`. Labels become
    /// `slot.inner`.
    pub fn lex_sum(&self, inner: &[Poset]) -> Result<Poset> {
        self.check_arity(inner.len())?;
        let mut labels = Vec::new();
        let mut block = Vec::new();
        let mut local = Vec::new();
        for (slot, p) in inner.iter().enumerate() {
            for (k, l) in p.labels.iter().enumerate() {
                labels.push(format!("{}.{}", self.labels[slot], l));
                block.push(slot);
                local.push(k);
            }
        }
        let n = labels.len();
        let less = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let (sa, sb) = (block[a], block[b]);
                        if sa == sb {
                            inner[sa].less[local[a]][local[b]]
                        } else {
                            self.less[sa][sb]
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Poset { labels, less })
    }

    /// Composition at a single slot; every other slot receives a point.
    pub fn compose_at(&self, slot: usize, inner: &Poset) -> Result<Poset> {
        if slot >= self.len() {
            return Err(Error::IndexOutOfRange {
                what: format!("slot {slot} of a {}-element poset", self.len()),
            });
        }
        let args: Vec<Poset> = (0..self.len())
            .map(|i| {
                if i == slot {
                    inner.clone()
                } else {
                    Poset::chain(1)
                }
            })
            .collect();
        self.lex_sum(&args)
    }

    pub fn disjoint_union(&self, other: &Poset) -> Poset {
        Poset::antichain(2)
            .lex_sum(&[self.clone(), other.clone()])
            .expect("binary arity")
    }

    /// Every element of `self` below every element of `other`.
    pub fn ordinal_sum(&self, other: &Poset) -> Poset {
        Poset::chain(2)
            .lex_sum(&[self.clone(), other.clone()])
            .expect("binary arity")
    }

    /// The order-reversed poset on the same labels.
    pub fn dual(&self) -> Poset {
        let n = self.len();
        Poset {
            labels: self.labels.clone(),
            less: (0..n)
                .map(|i| (0..n).map(|j| self.less[j][i]).collect())
                .collect(),
        }
    }

    /// Equal relation matrices, ignoring labels.
    pub fn same_shape(&self, other: &Poset) -> bool {
        self.less == other.less
    }

    /// Renames elements to `1..=n`, keeping the slot order.
    pub fn with_numbered_labels(&self) -> Poset {
        Poset {
            labels: numbered(self.len()),
            less: self.less.clone(),
        }
    }

    pub(crate) fn relation_matrix(&self) -> &[Vec<bool>] {
        &self.less
    }
}

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Transitive closure by repeated relational squaring `R <- R u R.R`.
fn close(less: &mut [Vec<bool>]) {
    let n = less.len();
    loop {
        let mut changed = false;
        let snapshot = less.to_vec();
        for (i, row) in snapshot.iter().enumerate() {
            for (k, _) in row.iter().enumerate().filter(|(_, &r)| r) {
                for j in 0..n {
                    if snapshot[k][j] && !less[i][j] {
                        less[i][j] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Writes `{a<b,c,...}` so that re-reading it yields the same label order.
pub(crate) fn hasse_literal(labels: &[String], covers: &[(usize, usize)]) -> String {
    let mut items: Vec<String> = covers
        .iter()
        .map(|&(a, b)| format!("{}<{}", labels[a], labels[b]))
        .collect();
    let mut seen = vec![false; labels.len()];
    let mut order = Vec::new();
    for &(a, b) in covers {
        for x in [a, b] {
            if !seen[x] {
                seen[x] = true;
                order.push(x);
            }
        }
    }
    for (i, l) in labels.iter().enumerate() {
        if !seen[i] {
            order.push(i);
            items.push(l.clone());
        }
    }
    if order.iter().copied().eq(0..labels.len()) {
        return format!("{{{}}}", items.join(","));
    }

    // Emit each cover once both ends are introduced, introducing labels in order.
    let mut items = Vec::new();
    let mut emitted = vec![false; covers.len()];
    for i in 0..labels.len() {
        let mut introduced = false;
        for (c, &(a, b)) in covers.iter().enumerate() {
            if !emitted[c] && a.max(b) == i {
                emitted[c] = true;
                introduced = true;
                items.push(format!("{}<{}", labels[a], labels[b]));
            }
        }
        if !introduced {
            items.push(labels[i].clone());
        }
    }
    format!("{{{}}}", items.join(","))
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hasse_literal(&self.labels, &self.covers()))
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset{self}")
    }
}

/// Wire form: elements in slot order plus the Hasse diagram.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl From<Poset> for PosetJson {
    fn from(p: Poset) -> Self {
        let covers = p
            .covers()
            .into_iter()
            .map(|(a, b)| (p.labels[a].clone(), p.labels[b].clone()))
            .collect();
        PosetJson {
            elements: p.labels,
            covers,
        }
    }
}

impl TryFrom<PosetJson> for Poset {
    type Error = Error;

    fn try_from(j: PosetJson) -> Result<Self> {
        Poset::new(j.elements, j.covers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_poset() -> Poset {
        Poset::new(["x", "y", "z", "w"], [("x", "y"), ("z", "y"), ("z", "w")]).unwrap()
    }

    #[test]
    fn construct_n_poset() {
        let p = n_poset();
        assert_eq!(p.len(), 4);
        assert_eq!(p.covers().len(), 3);
        assert_eq!(p.pairs().len(), 3);
        assert_eq!(p.to_string(), "{x<y,z<y,z<w}");
    }

    #[test]
    fn construct_errors() {
        assert_eq!(
            Poset::new(["a", "b"], [("a", "b"), ("b", "a")]),
            Err(Error::CycleDetected("a".into()))
        );
        assert_eq!(
            Poset::new(["a", "a"], Vec::<(&str, &str)>::new()),
            Err(Error::DuplicateLabel("a".into()))
        );
        assert_eq!(
            Poset::new(["a"], [("a", "q")]),
            Err(Error::UnknownLabel("q".into()))
        );
        assert!(matches!(
            Poset::new(["a"], [("a", "a")]),
            Err(Error::CycleDetected(_))
        ));
    }

    #[test]
    fn singleton_and_closure() {
        let p = Poset::new(["a"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.pairs().is_empty());
        let c = Poset::new(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")]).unwrap();
        assert_eq!(c.pairs().len(), 6);
        assert!(c.same_shape(&Poset::chain(4)));
    }

    #[test]
    fn canonical_families() {
        let c3 = Poset::canonical(CanonicalKind::Chain, 3);
        assert_eq!(c3.labels(), ["1", "2", "3"]);
        assert_eq!(c3.pairs(), vec![(0, 1), (0, 2), (1, 2)]);
        let a4 = Poset::canonical(CanonicalKind::Antichain, 4);
        assert_eq!(a4.len(), 4);
        assert!(a4.pairs().is_empty());
        assert!(Poset::chain(0).is_empty());
        assert_eq!(Poset::chain(6).pairs().len(), 15);
    }

    #[test]
    fn lex_sum_example() {
        let outer = Poset::new(["x", "y"], [("x", "y")]).unwrap();
        let ab = Poset::new(["a", "b"], Vec::<(&str, &str)>::new()).unwrap();
        let cd = Poset::new(["c", "d"], Vec::<(&str, &str)>::new()).unwrap();
        let s = outer.lex_sum(&[ab, cd]).unwrap();
        let expected = Poset::new(
            ["x.a", "x.b", "y.c", "y.d"],
            [
                ("x.a", "y.c"),
                ("x.a", "y.d"),
                ("x.b", "y.c"),
                ("x.b", "y.d"),
            ],
        )
        .unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn lex_sum_unit_and_chains() {
        let p = n_poset();
        let s = Poset::chain(1).lex_sum(std::slice::from_ref(&p)).unwrap();
        assert!(s.same_shape(&p));
        assert_eq!(s.label(0), "1.x");
        for k in 0..4 {
            for j in 0..4 {
                let s = Poset::chain(2)
                    .lex_sum(&[Poset::chain(k), Poset::chain(j)])
                    .unwrap();
                assert!(s.same_shape(&Poset::chain(k + j)));
            }
        }
        assert_eq!(
            p.lex_sum(&[Poset::chain(1)]),
            Err(Error::ArityMismatch {
                expected: 4,
                found: 1
            })
        );
    }

    #[test]
    fn chain_lengths() {
        for n in 0..6 {
            assert_eq!(Poset::chain(n).max_chain_length(), n);
        }
        assert_eq!(n_poset().max_chain_length(), 2);
        let pt = Poset::chain(1);
        let s = n_poset()
            .lex_sum(&[Poset::chain(2), pt.clone(), pt.clone(), pt])
            .unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.max_chain_length(), 3);
    }

    #[test]
    fn tropical() {
        let lt = Poset::chain(2);
        let par = Poset::antichain(2);
        for (m, n) in [(0, 0), (3, 5), (7, 2)] {
            assert_eq!(lt.tropical_eval(&[m, n]).unwrap(), m + n);
            assert_eq!(par.tropical_eval(&[m, n]).unwrap(), m.max(n));
        }
        let p = n_poset();
        for (m, n, r, s) in [(1, 2, 3, 4), (5, 1, 1, 5), (2, 0, 7, 1)] {
            assert_eq!(
                p.tropical_eval(&[m, n, r, s]).unwrap(),
                (m + n).max(n + r).max(r + s)
            );
        }
        assert!(matches!(
            p.tropical_eval(&[1]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn json_uses_covers() {
        let c = Poset::chain(3);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(
            text,
            r#"{"elements":["1","2","3"],"covers":[["1","2"],["2","3"]]}"#
        );
        let back: Poset = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let bad = r#"{"elements":["a","b"],"covers":[["a","b"],["b","a"]]}"#;
        assert!(serde_json::from_str::<Poset>(bad).is_err());
    }

    #[test]
    fn hasse_literal_preserves_order() {
        // `z` must be introduced before `y`
        let p = Poset::new(["x", "z", "y"], [("x", "y")]).unwrap();
        let text = p.to_string();
        assert_eq!(text, "{x,z,x<y}");
        let q = Poset::new(["b", "a"], [("a", "b")]).unwrap();
        assert_eq!(q.to_string(), "{b,a<b}");
    }

    #[test]
    fn dual_and_union() {
        let p = n_poset();
        assert_eq!(p.dual().dual(), p);
        let u = p.disjoint_union(&Poset::chain(2));
        assert_eq!(u.len(), 6);
        assert_eq!(u.covers().len(), 4);
        let o = Poset::antichain(2).ordinal_sum(&Poset::antichain(3));
        assert_eq!(o.pairs().len(), 6);
    }

    #[test]
    fn send_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Poset>();
    }
}
