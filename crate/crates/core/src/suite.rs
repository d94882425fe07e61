//! The full verification battery with a stable, versioned report.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::{posets_up_to, series_parallel};
use crate::discrepancy::{discrepancies, Severity, DISCREPANCY_IDS};
use crate::dsl::parse_poset;
use crate::error::{Error, Result};
use crate::identities::{series_identity_check, Params};
use crate::order::{Guard, Mode};
use crate::poset::Poset;
use crate::series::{hadamard, operad_eval_series, ordinal_mul, series_of, SeriesVec};
use crate::zeta::{
    chain_identity, entry22_check, finite_form_identity, goldbach_identity, verify_identity,
    IdentityRecord, PrecisionContext,
};

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A published value disagrees with the oracle and is reported as such.
    Flagged,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub id: String,
    pub status: Status,
    pub detail: Value,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub flagged: usize,
    pub error: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub digits: u32,
    pub tolerance: f64,
    pub summary: Summary,
    pub cases: Vec<Case>,
}

impl SuiteReport {
    /// No case failed or errored; flagged cases are expected.
    pub fn ok(&self) -> bool {
        self.summary.fail == 0 && self.summary.error == 0
    }
}

/// Poset literals sharing a row, and the row's `(index, coefficient)` terms.
pub type TableRow = (&'static [&'static str], &'static [(usize, i64)]);

/// Rows of the 4-element table: posets and their common value on `(Z_1, Z_1, Z_1, Z_1)`.
pub const FOUR_ELEMENT_TABLE: &[TableRow] = &[
    (&["{x<y<z<w}"], &[(4, 1)]),
    (&["{x<y<z,w}"], &[(3, 3), (4, 4)]),
    (
        &["{x<y,z<w}", "{x<y,x<z,x<w}", "{y<x,z<x,w<x}"],
        &[(2, 1), (3, 6), (4, 6)],
    ),
    (&["{x,y,z<w}"], &[(2, 4), (3, 15), (4, 12)]),
    (&["{x,y,z,w}"], &[(1, 1), (2, 14), (3, 36), (4, 24)]),
    (&["{x<y>z,w}", "{x,y>z<w}"], &[(2, 2), (3, 9), (4, 8)]),
    (&["{x<y>z<w}"], &[(2, 1), (3, 5), (4, 5)]),
];

pub fn table_value(terms: &[(usize, i64)]) -> SeriesVec {
    SeriesVec::from_terms(
        Mode::Strict,
        terms
            .iter()
            .map(|&(i, c)| (i, num_rational::BigRational::from_integer(c.into()))),
    )
}

/// `P` on four chain-provenanced `Z_1` arguments.
pub fn table_row_value(p: &Poset, guard: &Guard) -> Result<SeriesVec> {
    let args = vec![SeriesVec::chain(1); p.len()];
    Ok(operad_eval_series(p, &args, guard)?.result)
}

/// Posets with at most 4 elements plus chains and antichains of sizes 5 and 6.
pub fn identity_corpus() -> Vec<Poset> {
    let mut out = posets_up_to(4);
    for n in 5..=6 {
        out.push(Poset::chain(n));
        out.push(Poset::antichain(n));
    }
    out
}

type Job<'a> = Box<dyn Fn() -> Result<(Status, Value)> + Send + Sync + 'a>;

fn status(pass: bool) -> Status {
    if pass {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn numeric(rec: Result<IdentityRecord>) -> Result<(Status, Value)> {
    let rec = rec?;
    Ok((
        status(rec.pass),
        serde_json::to_value(&rec).expect("records serialize"),
    ))
}

fn jobs<'a>(ctx: &'a PrecisionContext, guard: &'a Guard) -> Vec<(String, Job<'a>)> {
    let mut out: Vec<(String, Job<'a>)> = Vec::new();

    for (row, (posets, terms)) in FOUR_ELEMENT_TABLE.iter().enumerate() {
        for (k, text) in posets.iter().enumerate() {
            out.push((
                format!("four-element/row{}{}", row + 1, (b'a' + k as u8) as char),
                Box::new(move || {
                    let p = parse_poset(text)?;
                    let got = table_row_value(&p, guard)?;
                    let want = table_value(terms);
                    Ok((
                        status(got.same_coeffs(&want)),
                        json!({"poset": text, "expected": want.to_string(), "computed": got.to_string()}),
                    ))
                }),
            ));
        }
    }

    out.push((
        "separation/series-parallel-4".into(),
        Box::new(move || {
            let target = table_value(FOUR_ELEMENT_TABLE[6].1);
            let sp = series_parallel(4);
            let mut hits = Vec::new();
            for p in &sp[4] {
                if table_row_value(p, guard)?.same_coeffs(&target) {
                    hits.push(p.to_string());
                }
            }
            Ok((
                status(hits.is_empty()),
                json!({"target": target.to_string(), "checked": sp[4].len(), "realized_by": hits}),
            ))
        }),
    ));

    for p in identity_corpus() {
        let lit = p.to_string();
        let q = p.clone();
        out.push((
            format!("reciprocity/{lit}"),
            Box::new(move || {
                let r = series_identity_check(
                    "stanley-reciprocity",
                    &Params::new().with_poset(q.clone()),
                    guard,
                )?;
                Ok((
                    status(r.pass),
                    serde_json::to_value(&r).expect("serializes"),
                ))
            }),
        ));
        if !p.is_empty() {
            let q = p.clone();
            out.push((
                format!("hstar/{lit}"),
                Box::new(move || {
                    let r = series_identity_check(
                        "hstar-top-vanishing",
                        &Params::new().with_poset(q.clone()),
                        guard,
                    )?;
                    Ok((
                        status(r.pass),
                        serde_json::to_value(&r).expect("serializes"),
                    ))
                }),
            ));
        }
        out.push((
            format!("finite-form/{lit}"),
            Box::new(move || {
                numeric(finite_form_identity(&p, guard).and_then(|r| verify_identity(&r, ctx)))
            }),
        ));
    }

    for alternating in [false, true] {
        out.push((
            format!(
                "goldbach/{}",
                if alternating { "alternating" } else { "plain" }
            ),
            Box::new(move || numeric(verify_identity(&goldbach_identity(alternating), ctx))),
        ));
    }
    for k in 1..=6 {
        out.push((
            format!("chain-finite-form/k{k}"),
            Box::new(move || {
                numeric(chain_identity(k, guard).and_then(|r| verify_identity(&r, ctx)))
            }),
        ));
    }
    for k in 2..=4 {
        out.push((
            format!("entry22/k{k}"),
            Box::new(move || numeric(entry22_check(k, ctx))),
        ));
    }

    let named: Vec<(String, &'static str, Params)> = {
        let mut v = Vec::new();
        for s in 0..=2 {
            for p in 0..=2 {
                for q in 0..=2 {
                    v.push((
                        format!("leibniz/s{s}p{p}q{q}"),
                        "ordinal-hadamard-leibniz",
                        Params::new().with("s", s).with("p", p).with("q", q),
                    ));
                }
            }
        }
        for t in [
            [1, 2, 1, 1],
            [2, 1, 1, 1],
            [0, 1, 2, 1],
            [1, 0, 1, 2],
            [2, 1, 0, 1],
            [1, 1, 2, 0],
        ] {
            v.push((
                format!("reversal/{}{}{}{}", t[0], t[1], t[2], t[3]),
                "n-poset-reversal",
                Params::new()
                    .with("a", t[0])
                    .with("b", t[1])
                    .with("c", t[2])
                    .with("d", t[3]),
            ));
        }
        for n in 0..=6 {
            v.push((
                format!("antichain-strict-weak/n{n}"),
                "antichain-strict-weak",
                Params::new().with("n", n),
            ));
            if n >= 1 {
                v.push((
                    format!("points-identity/n{n}"),
                    "points-identity",
                    Params::new().with("n", n),
                ));
            }
        }
        for k in 1..=4 {
            v.push((
                format!("slot-formulas/k{k}"),
                "n-poset-slot-formulas",
                Params::new().with("k", k),
            ));
        }
        for (n, k, q) in [(4, 2, 2), (5, 3, 1), (3, 3, 3), (6, 2, 4)] {
            v.push((
                format!("nested-sum/n{n}k{k}q{q}"),
                "nested-sum",
                Params::new().with("n", n).with("k", k).with("q", q),
            ));
        }
        v
    };
    for (id, name, params) in named {
        out.push((
            id,
            Box::new(move || {
                let r = series_identity_check(name, &params, guard)?;
                Ok((
                    status(r.pass),
                    serde_json::to_value(&r).expect("serializes"),
                ))
            }),
        ));
    }

    out.push((
        "structural/pairs-up-to-5".into(),
        Box::new(move || {
            let (checked, bad) = structural_pairs(5, guard)?;
            Ok((
                status(bad.is_empty()),
                json!({"pairs": checked, "mismatches": bad}),
            ))
        }),
    ));

    for id in DISCREPANCY_IDS {
        out.push((
            format!("discrepancy/{id}"),
            Box::new(move || {
                let d = discrepancies(guard)?
                    .into_iter()
                    .find(|d| d.id == *id)
                    .ok_or_else(|| Error::UnknownIdentity(id.to_string()))?;
                let st = match (d.flagged, d.severity) {
                    (true, Severity::Inconsistency) => Status::Flagged,
                    (false, Severity::Ambiguity) => Status::Pass,
                    _ => Status::Fail,
                };
                Ok((st, serde_json::to_value(&d).expect("serializes")))
            }),
        ));
    }
    out
}

/// Structural constants against the lexicographic sums for every ordered pair
/// of classes with `|P| + |Q| <= max_total`. Returns the pair count and any
/// mismatches.
pub fn structural_pairs(max_total: usize, guard: &Guard) -> Result<(usize, Vec<String>)> {
    let corpus = posets_up_to(max_total);
    let series: Vec<SeriesVec> = corpus
        .par_iter()
        .map(|p| series_of(p, Mode::Strict, guard))
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..corpus.len())
        .flat_map(|i| (0..corpus.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| corpus[i].len() + corpus[j].len() <= max_total)
        .collect();
    let bad: Vec<Vec<String>> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Vec<String>> {
            let (p, q) = (&corpus[i], &corpus[j]);
            let mut bad = Vec::new();
            let union = series_of(&p.disjoint_union(q), Mode::Strict, guard)?;
            if !hadamard(&series[i], &series[j])?.same_coeffs(&union) {
                bad.push(format!("{p} | {q}"));
            }
            let stacked = series_of(&p.ordinal_sum(q), Mode::Strict, guard)?;
            if !ordinal_mul(&series[i], &series[j])?.same_coeffs(&stacked) {
                bad.push(format!("{p} * {q}"));
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    Ok((pairs.len(), bad.into_iter().flatten().collect()))
}

/// Runs every case. The report is sorted by case id and independent of
/// scheduling.
pub fn run_suite(ctx: &PrecisionContext, guard: &Guard) -> Result<SuiteReport> {
    ctx.validate()?;
    let jobs = jobs(ctx, guard);
    let mut cases: Vec<Case> = jobs
        .par_iter()
        .map(|(id, job)| {
            let (status, detail) = match job() {
                Ok(r) => r,
                Err(e) => (
                    Status::Error,
                    json!({
                        "error": e.to_string(),
                        "guard_exceeded": matches!(e, Error::EnumerationGuard { .. }),
                    }),
                ),
            };
            Case {
                id: id.clone(),
                status,
                detail,
            }
        })
        .collect();
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    let mut summary = Summary {
        total: cases.len(),
        ..Summary::default()
    };
    for c in &cases {
        match c.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Flagged => summary.flagged += 1,
            Status::Error => summary.error += 1,
        }
    }
    Ok(SuiteReport {
        schema: SCHEMA_VERSION,
        digits: ctx.digits,
        tolerance: ctx.tolerance,
        summary,
        cases,
    })
}

/// Whether some case failed because of the enumeration guard.
pub fn guard_tripped(report: &SuiteReport) -> bool {
    report
        .cases
        .iter()
        .any(|c| c.detail["guard_exceeded"].as_bool() == Some(true))
}
