use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use posetoperad::basis::Polynomial;
use posetoperad::discrepancy::{discrepancies, relevant_to};
use posetoperad::dsl::{parse_poset, ParseError};
use posetoperad::kernels::{eulerian_row, stirling2};
use posetoperad::order::{count_maps, d_vector, Guard, Mode};
use posetoperad::scalar::{format_ratio, parse_ratio};
use posetoperad::series::series_of;
use posetoperad::suite::{guard_tripped, run_suite, SCHEMA_VERSION};
use posetoperad::zeta::{
    finite_form_identity, inverse_power_sum, verify_identity, zeta_value, PrecisionContext,
};
use posetoperad::{Error, Poset};

#[derive(Parser, Debug)]
#[command(
    name = "posetoperad",
    version,
    about = "Order polynomials, order series and zeta identities of finite posets"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Emit one JSON object per result.
    #[arg(long, global = true)]
    json: bool,
    /// Decimal digits for zeta evaluation.
    #[arg(long, global = true, env = "POSETOPERAD_DIGITS", default_value_t = 50)]
    digits: u32,
    /// Absolute tolerance for numeric checks.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tolerance: f64,
    /// Maximum number of series terms summed in a numeric check.
    #[arg(long, global = true, default_value_t = 100_000)]
    term_cap: usize,
    /// Maximum poset size for map enumeration.
    #[arg(long, global = true, default_value_t = 12)]
    guard: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// d-vector and both order polynomials.
    Poly { expr: String },
    /// Order series in the inclusion-exclusion basis and its closed form.
    #[command(group(ArgGroup::new("mode").args(["strict", "weak"])))]
    Series {
        expr: String,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        weak: bool,
    },
    /// Finite form of the alternating zeta series of the poset, verified numerically.
    ZetaIdentity { expr: String },
    /// Exact `sum_n Omega(P, n) / r^n`.
    InverseSum {
        expr: String,
        /// Rational with |r| > 1, e.g. `2` or `7/3`.
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        /// Sum the weak polynomial instead of the strict one.
        #[arg(long)]
        weak: bool,
    },
    /// Number of strict and weak order-preserving maps into a chain.
    Eval {
        expr: String,
        #[arg(long)]
        at: usize,
    },
    /// Longest weighted chain with the given slot lengths.
    Tropical {
        expr: String,
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<u64>,
    },
    /// Eulerian or Stirling (second kind) triangle up to row n.
    #[command(group(ArgGroup::new("table").args(["eulerian", "stirling"]).required(true)))]
    Tables {
        #[arg(long, value_name = "N")]
        eulerian: Option<usize>,
        #[arg(long, value_name = "N")]
        stirling: Option<usize>,
    },
    /// zeta(s), or zeta(s) - 1, at the requested precision.
    Zeta {
        s: u32,
        #[arg(long)]
        minus_one: bool,
    },
    /// The full identity battery.
    VerifySuite,
}

/// Outcome of one command, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Outcome {
    Ok = 0,
    Failed = 1,
    Usage = 2,
    Guard = 3,
}

struct Ctx {
    opts: Opts,
    guard: Guard,
    precision: PrecisionContext,
}

impl Ctx {
    fn emit(&self, human: String, json: Value) {
        let mut out = io::stdout().lock();
        let text = if self.opts.json {
            serde_json::to_string(&json).expect("values serialize")
        } else {
            human
        };
        // a closed pipe is not worth a panic
        let _ = writeln!(out, "{text}");
    }
}

fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({"schema": SCHEMA_VERSION, "command": command});
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    v
}

fn fail(err: &Error, source: &str) -> Outcome {
    match err {
        Error::Parse(p) => eprintln!("error: {p}\n{}", caret(source, p)),
        other => eprintln!("error: {other}"),
    }
    match err {
        Error::EnumerationGuard { .. } => Outcome::Guard,
        _ => Outcome::Usage,
    }
}

fn caret(source: &str, p: &ParseError) -> String {
    let line = source.lines().nth(p.line.saturating_sub(1)).unwrap_or("");
    format!("  {line}\n  {}^", " ".repeat(p.col.saturating_sub(1)))
}

fn poset(expr: &str) -> Result<Poset, Error> {
    Ok(parse_poset(expr)?)
}

fn mono(p: &posetoperad::Poly) -> String {
    p.to_monomial().to_string()
}

fn cmd_poly(ctx: &Ctx, expr: &str) -> Result<Outcome, Error> {
    let p = poset(expr)?;
    let d = d_vector(&p, &ctx.guard)?;
    let strict = d.strict_polynomial();
    let weak = d.weak_polynomial();
    let ids = relevant_to(&p);
    // the recorded values are small fixed computations, independent of --guard
    let notes: Vec<_> = if ids.is_empty() {
        Vec::new()
    } else {
        discrepancies(&Guard::default())?
            .into_iter()
            .filter(|x| ids.contains(&x.id))
            .collect()
    };
    let entries: Vec<String> = (1..=p.len()).map(|i| d.get(i).to_string()).collect();
    let mut human = format!(
        "poset: {p}\nd: [{}]\nstrict: {strict} = {}\nweak: {weak} = {}\nlinear extensions: {}\ntriangulation: {}",
        entries.join(", "),
        mono(&strict),
        mono(&weak),
        d.linear_extensions(),
        d.triangulation_summary()
    );
    for n in &notes {
        human.push_str(&format!(
            "\ndiscrepancy: {} (printed {}, derived {})",
            n.id, n.printed, n.derived
        ));
    }
    ctx.emit(
        human,
        envelope(
            "poly",
            json!({
                "poset": p,
                "d": entries,
                "strict_poly": Polynomial::Binomial(strict.clone()),
                "weak_poly": Polynomial::Binomial(weak.clone()),
                "strict_monomial": Polynomial::Monomial(strict.to_monomial()),
                "weak_monomial": Polynomial::Monomial(weak.to_monomial()),
                "linear_extensions": d.linear_extensions().to_string(),
                "discrepancies": notes,
            }),
        ),
    );
    Ok(Outcome::Ok)
}

fn cmd_series(ctx: &Ctx, expr: &str, weak: bool) -> Result<Outcome, Error> {
    let p = poset(expr)?;
    let mode = if weak { Mode::Weak } else { Mode::Strict };
    let s = series_of(&p, mode, &ctx.guard)?;
    let cf = s.closed_form();
    let h_star = if weak && !p.is_empty() {
        cf.h_star()
    } else {
        None
    };
    let mut human = format!("series: {s}\nclosed form: {cf}");
    if let Some(h) = &h_star {
        human.push_str(&format!("\nh*: {h}"));
    }
    ctx.emit(
        human,
        envelope(
            "series",
            json!({
                "series": s,
                "closed_form": cf,
                "h_star": h_star.map(Polynomial::Monomial),
            }),
        ),
    );
    Ok(Outcome::Ok)
}

fn cmd_zeta_identity(ctx: &Ctx, expr: &str) -> Result<Outcome, Error> {
    let p = poset(expr)?;
    let rec = verify_identity(&finite_form_identity(&p, &ctx.guard)?, &ctx.precision)?;
    let mut human = format!(
        "identity: {}\nlhs: {}\nrhs: {}\nrhs (shifted): {}",
        rec.name,
        rec.lhs.describe(),
        rec.rhs,
        rec.rhs.display_shifted()
    );
    if let Some(n) = &rec.numeric {
        human.push_str(&format!(
            "\nlhs value: {} ± {:.1e}\nrhs value: {}\n|lhs - rhs| = {:.1e} (tolerance {:.0e}, {} terms, {} digits)",
            n.lhs, n.bound, n.rhs, n.difference, n.tolerance, n.terms, n.digits
        ));
    }
    for note in &rec.notes {
        human.push_str(&format!("\nnote: {note}"));
    }
    human.push_str(if rec.pass {
        "\nresult: pass"
    } else {
        "\nresult: FAIL"
    });
    ctx.emit(
        human,
        envelope(
            "zeta-identity",
            serde_json::to_value(&rec).expect("serializes"),
        ),
    );
    Ok(if rec.pass {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

fn cmd_inverse_sum(ctx: &Ctx, expr: &str, r: &str, weak: bool) -> Result<Outcome, Error> {
    let p = poset(expr)?;
    let rq = parse_ratio(r)
        .ok_or_else(|| Error::InvalidParameter(format!("`{r}` is not a rational")))?;
    let mode = if weak { Mode::Weak } else { Mode::Strict };
    let v = inverse_power_sum(&p, &rq, mode, &ctx.guard)?;
    ctx.emit(
        format_ratio(&v),
        envelope(
            "inverse-sum",
            json!({"poset": p, "r": format_ratio(&rq), "mode": mode, "value": format_ratio(&v)}),
        ),
    );
    Ok(Outcome::Ok)
}

fn cmd_eval(ctx: &Ctx, expr: &str, at: usize) -> Result<Outcome, Error> {
    let p = poset(expr)?;
    let strict = count_maps(&p, at, Mode::Strict, &ctx.guard)?;
    let weak = count_maps(&p, at, Mode::Weak, &ctx.guard)?;
    ctx.emit(
        format!("strict: {strict}\nweak: {weak}"),
        envelope(
            "eval",
            json!({"poset": p, "at": at, "strict": strict.to_string(), "weak": weak.to_string()}),
        ),
    );
    Ok(Outcome::Ok)
}

fn cmd_tropical(ctx: &Ctx, expr: &str, lengths: &[u64]) -> Result<Outcome, Error> {
    let p = poset(expr)?;
    let v = p.tropical_eval(lengths)?;
    ctx.emit(
        v.to_string(),
        envelope(
            "tropical",
            json!({"poset": p, "lengths": lengths, "value": v}),
        ),
    );
    Ok(Outcome::Ok)
}

fn cmd_tables(
    ctx: &Ctx,
    eulerian: Option<usize>,
    stirling: Option<usize>,
) -> Result<Outcome, Error> {
    let (kind, rows): (&str, Vec<Vec<String>>) = match (eulerian, stirling) {
        (Some(n), _) => (
            "eulerian",
            (1..=n)
                .map(|m| eulerian_row(m).iter().map(ToString::to_string).collect())
                .collect(),
        ),
        (None, Some(n)) => (
            "stirling",
            (0..=n)
                .map(|m| (0..=m).map(|k| stirling2(m, k).to_string()).collect())
                .collect(),
        ),
        (None, None) => unreachable!("clap requires one table"),
    };
    let human = rows
        .iter()
        .map(|r| r.join(" "))
        .collect::<Vec<_>>()
        .join("\n");
    ctx.emit(
        human,
        envelope("tables", json!({"kind": kind, "rows": rows})),
    );
    Ok(Outcome::Ok)
}

fn cmd_zeta(ctx: &Ctx, s: u32, minus_one: bool) -> Result<Outcome, Error> {
    let z = zeta_value(s, &ctx.precision, minus_one)?;
    let name = if minus_one {
        format!("zeta({s}) - 1")
    } else {
        format!("zeta({s})")
    };
    ctx.emit(
        format!("{name} = {} ± {:.1e}", z.decimal, z.bound),
        envelope(
            "zeta",
            json!({"s": s, "minus_one": minus_one, "digits": ctx.precision.digits, "value": z.decimal, "bound": z.bound}),
        ),
    );
    Ok(Outcome::Ok)
}

fn cmd_verify_suite(ctx: &Ctx) -> Result<Outcome, Error> {
    let report = run_suite(&ctx.precision, &ctx.guard)?;
    let mut human: Vec<String> = report
        .cases
        .iter()
        .map(|c| format!("{:<7} {}", format!("{:?}", c.status).to_uppercase(), c.id))
        .collect();
    let s = &report.summary;
    human.push(format!(
        "{} cases: {} pass, {} flagged, {} fail, {} error",
        s.total, s.pass, s.flagged, s.fail, s.error
    ));
    let mut v = serde_json::to_value(&report).expect("serializes");
    if let Value::Object(m) = &mut v {
        m.insert("command".into(), json!("verify-suite"));
    }
    ctx.emit(human.join("\n"), v);
    Ok(if guard_tripped(&report) {
        Outcome::Guard
    } else if report.ok() {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

fn run_one(ctx: &Ctx, command: &Command, expr: Option<&str>) -> Outcome {
    let source = expr.unwrap_or("");
    let result = match command {
        Command::Poly { .. } => cmd_poly(ctx, source),
        Command::Series { weak, .. } => cmd_series(ctx, source, *weak),
        Command::ZetaIdentity { .. } => cmd_zeta_identity(ctx, source),
        Command::InverseSum { r, weak, .. } => cmd_inverse_sum(ctx, source, r, *weak),
        Command::Eval { at, .. } => cmd_eval(ctx, source, *at),
        Command::Tropical { lengths, .. } => cmd_tropical(ctx, source, lengths),
        Command::Tables { eulerian, stirling } => cmd_tables(ctx, *eulerian, *stirling),
        Command::Zeta { s, minus_one } => cmd_zeta(ctx, *s, *minus_one),
        Command::VerifySuite => cmd_verify_suite(ctx),
    };
    result.unwrap_or_else(|e| fail(&e, source))
}

fn expr_of(command: &Command) -> Option<&str> {
    match command {
        Command::Poly { expr }
        | Command::Series { expr, .. }
        | Command::ZetaIdentity { expr }
        | Command::InverseSum { expr, .. }
        | Command::Eval { expr, .. }
        | Command::Tropical { expr, .. } => Some(expr),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                Outcome::Usage as u8
            } else {
                0
            });
        }
    };
    let precision = PrecisionContext {
        digits: cli.opts.digits,
        tolerance: cli.opts.tolerance,
        term_cap: cli.opts.term_cap,
    };
    if let Err(e) = precision.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(Outcome::Usage as u8);
    }
    let ctx = Ctx {
        guard: Guard::with_max_elements(cli.opts.guard),
        precision,
        opts: cli.opts,
    };
    let outcome = match expr_of(&cli.command) {
        // batch mode: one expression per line, blank lines and `#` comments skipped
        Some("-") => {
            let mut worst = Outcome::Ok;
            for line in io::stdin().lock().lines() {
                let Ok(line) = line else {
                    eprintln!("error: cannot read standard input");
                    return ExitCode::from(Outcome::Usage as u8);
                };
                let text = line.trim();
                if text.is_empty() || text.starts_with('#') {
                    continue;
                }
                worst = worst.max(run_one(&ctx, &cli.command, Some(text)));
            }
            worst
        }
        e => run_one(&ctx, &cli.command, e),
    };
    ExitCode::from(outcome as u8)
}
