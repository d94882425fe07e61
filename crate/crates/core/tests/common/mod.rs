//! Brute-force referees, deliberately independent of the library's
//! algorithms. Keep inputs small.
#![allow(dead_code)]

use num_bigint::BigInt;
use posetoperad::order::Mode;
use posetoperad::Poset;
use proptest::prelude::*;

/// Every map `P -> {1..n}`, filtered by the order condition.
pub fn naive_count(p: &Poset, n: usize, mode: Mode) -> u64 {
    let k = p.len();
    assert!(k <= 6, "naive enumeration is capped at 6 elements");
    let pairs = p.pairs();
    let mut vals = vec![1usize; k];
    let mut count = 0;
    if n == 0 {
        return u64::from(k == 0);
    }
    loop {
        let ok = pairs.iter().all(|&(a, b)| match mode {
            Mode::Strict => vals[a] < vals[b],
            Mode::Weak => vals[a] <= vals[b],
        });
        count += u64::from(ok);
        let mut slot = 0;
        loop {
            if slot == k {
                return count;
            }
            vals[slot] += 1;
            if vals[slot] <= n {
                break;
            }
            vals[slot] = 1;
            slot += 1;
        }
    }
}

/// Strict maps onto `{1..i}` (every value hit).
pub fn naive_surjections(p: &Poset, i: usize) -> u64 {
    let k = p.len();
    let pairs = p.pairs();
    if i == 0 {
        return u64::from(k == 0);
    }
    if k == 0 {
        return 0;
    }
    let mut vals = vec![1usize; k];
    let mut count = 0;
    loop {
        let strict = pairs.iter().all(|&(a, b)| vals[a] < vals[b]);
        let onto = (1..=i).all(|v| vals.contains(&v));
        count += u64::from(strict && onto);
        let mut slot = 0;
        loop {
            if slot == k {
                return count;
            }
            vals[slot] += 1;
            if vals[slot] <= i {
                break;
            }
            vals[slot] = 1;
            slot += 1;
        }
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Orderings of the elements that respect every relation.
pub fn naive_linear_extensions(p: &Poset) -> u64 {
    permutations(p.len())
        .into_iter()
        .filter(|perm| {
            let mut at = vec![0; perm.len()];
            for (k, &e) in perm.iter().enumerate() {
                at[e] = k;
            }
            p.pairs().iter().all(|&(a, b)| at[a] < at[b])
        })
        .count() as u64
}

/// Permutations of `n` letters with exactly `i` descents.
pub fn descent_count(n: usize, i: usize) -> u64 {
    permutations(n)
        .into_iter()
        .filter(|p| p.windows(2).filter(|w| w[0] > w[1]).count() == i)
        .count() as u64
}

/// Set partitions of `n` into `k` blocks, by counting surjections and
/// dividing by `k!`.
pub fn naive_stirling2(n: usize, k: usize) -> u64 {
    if k == 0 {
        return u64::from(n == 0);
    }
    let mut vals = vec![0usize; n];
    let mut onto = 0u64;
    loop {
        if (0..k).all(|v| vals.contains(&v)) {
            onto += 1;
        }
        let mut slot = 0;
        loop {
            if slot == n {
                let fact: u64 = (1..=k as u64).product();
                return onto / fact;
            }
            vals[slot] += 1;
            if vals[slot] < k {
                break;
            }
            vals[slot] = 0;
            slot += 1;
        }
    }
}

pub fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

/// A random poset on `n` elements: a random DAG on a shuffled order.
pub fn poset_with(n: usize, edges: &[bool], shuffle: &[usize]) -> Poset {
    let mut order: Vec<usize> = (0..n).collect();
    for (i, &s) in shuffle.iter().enumerate().take(n) {
        order.swap(i, i + s % (n - i));
    }
    let mut pairs = Vec::new();
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if edges[k] {
                pairs.push((order[a], order[b]));
            }
            k += 1;
        }
    }
    let labels = (0..n).map(|i| format!("e{i}")).collect();
    Poset::from_pairs(labels, &pairs).expect("edges follow a total order")
}

pub fn arb_poset(max: usize) -> impl Strategy<Value = Poset> {
    (0..=max).prop_flat_map(|n| {
        let m = n * n.saturating_sub(1) / 2;
        (
            Just(n),
            proptest::collection::vec(proptest::bool::weighted(0.35), m),
            proptest::collection::vec(0usize..64, n),
        )
            .prop_map(|(n, e, s)| poset_with(n, &e, &s))
    })
}
