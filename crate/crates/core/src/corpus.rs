//! Posets up to isomorphism, for exhaustive checks.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::poset::Poset;

/// Relation bits under the best relabeling, plus the size. Two posets are
/// isomorphic iff their keys agree. Supports up to 8 elements.
pub fn canonical_key(p: &Poset) -> (usize, u64) {
    let n = p.len();
    assert!(n <= 8, "canonical keys are limited to 8 elements");
    let rel = p.relation_matrix();
    // elements are only permuted within classes of equal (below, above) counts
    let mut inv: Vec<(usize, usize, usize)> = (0..n)
        .map(|i| {
            let below = (0..n).filter(|&j| rel[j][i]).count();
            let above = (0..n).filter(|&j| rel[i][j]).count();
            (below, above, i)
        })
        .collect();
    inv.sort();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for w in 0..n {
        if w > 0 && inv[w].0 == inv[w - 1].0 && inv[w].1 == inv[w - 1].1 {
            groups.last_mut().expect("nonempty").push(inv[w].2);
        } else {
            groups.push(vec![inv[w].2]);
        }
    }
    let mut best = u64::MAX;
    let mut order = Vec::with_capacity(n);
    search(&groups, 0, &mut order, rel, &mut best);
    (n, best)
}

/// Isomorphism test; posets above 8 elements fall back to equal relation
/// matrices.
pub fn isomorphic(p: &Poset, q: &Poset) -> bool {
    if p.len() != q.len() {
        return false;
    }
    if p.len() > 8 {
        return p.same_shape(q);
    }
    canonical_key(p) == canonical_key(q)
}

fn search(
    groups: &[Vec<usize>],
    g: usize,
    order: &mut Vec<usize>,
    rel: &[Vec<bool>],
    best: &mut u64,
) {
    if g == groups.len() {
        let mut bits = 0u64;
        for (a, &i) in order.iter().enumerate() {
            for (b, &j) in order.iter().enumerate() {
                if rel[i][j] {
                    bits |= 1 << (a * 8 + b);
                }
            }
        }
        *best = (*best).min(bits);
        return;
    }
    permute(
        &groups[g],
        &mut vec![false; groups[g].len()],
        order,
        &mut |order| search(groups, g + 1, order, rel, best),
    );
}

fn permute(
    items: &[usize],
    used: &mut [bool],
    order: &mut Vec<usize>,
    f: &mut dyn FnMut(&mut Vec<usize>),
) {
    if used.iter().all(|&u| u) {
        f(order);
        return;
    }
    for k in 0..items.len() {
        if !used[k] {
            used[k] = true;
            order.push(items[k]);
            permute(items, used, order, f);
            order.pop();
            used[k] = false;
        }
    }
}

fn dedup(candidates: Vec<Poset>) -> Vec<Poset> {
    let keyed: Vec<((usize, u64), Poset)> = candidates
        .into_par_iter()
        .map(|p| (canonical_key(&p), p))
        .collect();
    let mut seen = BTreeMap::new();
    for (k, p) in keyed {
        seen.entry(k).or_insert(p);
    }
    seen.into_values()
        .map(|p| p.with_numbered_labels())
        .collect()
}

/// One representative per isomorphism class of `n`-element posets, built by
/// adding a maximal element above every down-set of the smaller classes.
pub fn posets_up_to_iso(n: usize) -> Vec<Poset> {
    let mut layer = vec![Poset::empty()];
    for _ in 0..n {
        let candidates: Vec<Poset> = layer
            .iter()
            .flat_map(|p| down_sets(p).into_iter().map(move |ideal| extend(p, &ideal)))
            .collect();
        layer = dedup(candidates);
    }
    layer
}

/// Every poset class with at most `n` elements, smallest first.
pub fn posets_up_to(n: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    let mut layer = vec![Poset::empty()];
    out.push(Poset::empty());
    for _ in 0..n {
        let candidates: Vec<Poset> = layer
            .iter()
            .flat_map(|p| down_sets(p).into_iter().map(move |ideal| extend(p, &ideal)))
            .collect();
        layer = dedup(candidates);
        out.extend(layer.iter().cloned());
    }
    out
}

fn down_sets(p: &Poset) -> Vec<Vec<usize>> {
    let n = p.len();
    (0u32..1 << n)
        .filter(|&mask| {
            (0..n).all(|j| mask & (1 << j) == 0 || p.predecessors(j).all(|i| mask & (1 << i) != 0))
        })
        .map(|mask| (0..n).filter(|&j| mask & (1 << j) != 0).collect())
        .collect()
}

fn extend(p: &Poset, below: &[usize]) -> Poset {
    let n = p.len();
    let mut labels: Vec<String> = p.labels().to_vec();
    labels.push("new".to_string());
    let mut pairs = p.pairs();
    pairs.extend(below.iter().map(|&i| (i, n)));
    Poset::from_pairs(labels, &pairs)
        .expect("adding a maximal element keeps the order acyclic")
        .with_numbered_labels()
}

/// Posets generated from points by disjoint union and ordinal sum, one per
/// isomorphism class, indexed by size `0..=n`.
pub fn series_parallel(n: usize) -> Vec<Vec<Poset>> {
    let mut by_size: Vec<Vec<Poset>> = vec![vec![Poset::empty()]];
    if n >= 1 {
        by_size.push(vec![Poset::chain(1)]);
    }
    for m in 2..=n {
        let mut candidates = Vec::new();
        for a in 1..m {
            for p in &by_size[a] {
                for q in &by_size[m - a] {
                    candidates.push(p.disjoint_union(q));
                    candidates.push(p.ordinal_sum(q));
                }
            }
        }
        by_size.push(dedup(candidates));
    }
    by_size
}
