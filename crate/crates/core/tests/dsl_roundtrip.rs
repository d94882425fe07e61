use posetoperad::dsl::{format_expr, parse_expr, resolve, Env, Expr, Pos};
use proptest::prelude::*;

const NAMES: &[&str] = &["x", "y", "z", "w", "top", "b_1", "v.2", "Q"];

/// A Hasse literal on `n` labels. Covers follow a hidden total order so the
/// literal is acyclic, and are listed by their later endpoint, which is the
/// order the formatter writes them in.
fn hasse(n: usize) -> impl Strategy<Value = Expr> {
    let m = n * n.saturating_sub(1) / 2;
    (
        Just(n),
        Just(NAMES.to_vec()).prop_shuffle(),
        proptest::collection::vec(any::<bool>(), m),
        Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
    )
        .prop_map(|(n, names, edges, rank)| {
            let labels: Vec<String> = names[..n].iter().map(|s| s.to_string()).collect();
            let mut covers = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if edges[k] {
                        let (lo, hi) = if rank[a] < rank[b] { (a, b) } else { (b, a) };
                        covers.push((lo, hi));
                    }
                    k += 1;
                }
            }
            covers.sort_by_key(|&(a, b)| a.max(b));
            Expr::HasseLit {
                covers: covers
                    .iter()
                    .map(|&(a, b)| (labels[a].clone(), labels[b].clone()))
                    .collect(),
                labels,
                pos: Pos::default(),
            }
        })
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0usize..5).prop_map(Expr::ChainLit),
        (0usize..5).prop_map(Expr::AntichainLit),
        (0usize..5).prop_flat_map(hasse),
        prop::sample::select(vec!["pt", "N", "star", "foo"]).prop_map(|n| Expr::Var {
            name: n.into(),
            pos: Pos::default()
        }),
    ]
}

fn outer_of(k: usize) -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::ChainLit(k)),
        Just(Expr::AntichainLit(k)),
        hasse(k)
    ]
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 48, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Union(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::OrdinalSum(Box::new(a), Box::new(b))),
            (1usize..4).prop_flat_map(move |k| {
                (outer_of(k), proptest::collection::vec(inner.clone(), k)).prop_map(|(o, args)| {
                    Expr::LexApply {
                        outer: Box::new(o),
                        args,
                        pos: Pos::default(),
                    }
                })
            }),
        ]
    })
}

fn depth(e: &Expr) -> usize {
    match e {
        Expr::Union(a, b) | Expr::OrdinalSum(a, b) => 1 + depth(a).max(depth(b)),
        Expr::LexApply { outer, args, .. } => {
            1 + args
                .iter()
                .map(depth)
                .chain([depth(outer)])
                .max()
                .unwrap_or(0)
        }
        _ => 0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn format_then_parse_is_identity(e in arb_expr()) {
        prop_assert!(depth(&e) <= 4);
        let text = format_expr(&e);
        let back = parse_expr(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(&back, &e, "{}", text);
        prop_assert_eq!(format_expr(&back), text);
    }

    #[test]
    fn resolution_survives_round_trip(e in arb_expr()) {
        let mut env = Env::default();
        env.define("foo", posetoperad::Poset::chain(2));
        let direct = resolve(&e, &env);
        let again = resolve(&parse_expr(&format_expr(&e)).unwrap(), &env);
        match (direct, again) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(a), Err(b)) => prop_assert_eq!(a.kind, b.kind),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }
}

#[test]
fn whitespace_and_sugar_do_not_matter() {
    let a = parse_expr("  {x<y>z<w} ( C2 ,C1, A1 , {p<q} ) ").unwrap();
    let b = parse_expr("{x<y,z<y,z<w}(C2, C1, A1, {p<q})").unwrap();
    assert_eq!(a, b);
}
