use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dedesym_core::checks::{self, Suite};
use dedesym_core::classical::{
    dedekind_sum_fast, dedekind_sum_naive, rademacher_phi, CoprimePair, IntegerMatrix,
};
use dedesym_core::cocycle::{omega, GroupElement};
use dedesym_core::equidist::{
    discrepancy, enumerate_with, geometric_checkpoints, growth_fit, write_series_csv,
    EnumerateOptions, WeylSumSeries,
};
use dedesym_core::hecke::{row_to_word, DoubleCosetRow, HeckeGroup, SymbolValue};
use dedesym_core::{Error, Rational, Word};
use serde_json::{json, Value};

mod output;

use output::{exact_json, rational_json, Out};

#[derive(Parser, Debug)]
#[command(name = "dedesym", version, about = "Dedekind sums and Dedekind symbols for Hecke triangle groups")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Bits of precision for floating views of exact values.
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(53..))]
    bits: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classical Dedekind sum s(a, c).
    Sum {
        #[arg(allow_hyphen_values = true)]
        a: i64,
        c: i64,
        #[arg(long, conflicts_with = "fast")]
        naive: bool,
        #[arg(long)]
        fast: bool,
    },
    /// Rademacher phi of an SL2(Z) matrix.
    Phi {
        #[arg(allow_hyphen_values = true)]
        a: i64,
        #[arg(allow_hyphen_values = true)]
        b: i64,
        #[arg(allow_hyphen_values = true)]
        c: i64,
        #[arg(allow_hyphen_values = true)]
        d: i64,
    },
    /// The sign cocycle omega(g, h).
    Omega {
        #[command(flatten)]
        group: GroupArg,
        /// Matrix `a,b,c,d`.
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Dedekind symbol of a word or of a bottom row.
    Symbol {
        #[command(flatten)]
        group: GroupArg,
        /// Word such as `i,t^2,i,t^-1`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "row", required_unless_present = "row")]
        word: Option<String>,
        /// Bottom row `c;d` in normalized coordinates.
        #[arg(long, allow_hyphen_values = true)]
        row: Option<String>,
        /// Read `--row` in the original coordinates of H_q.
        #[arg(long, requires = "row")]
        unnormalized: bool,
        #[arg(long, value_enum, default_value_t = Algorithm::Both)]
        algorithm: Algorithm,
    },
    /// Decide membership in H_q and print a word.
    Member {
        #[command(flatten)]
        group: GroupArg,
        /// Matrix `a,b,c,d` in the original coordinates.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Rosen reduction trace of a bottom row.
    Reduce {
        #[command(flatten)]
        group: GroupArg,
        /// Bottom row `c;d` in normalized coordinates.
        #[arg(long, allow_hyphen_values = true)]
        row: String,
    },
    /// Weyl sums, discrepancy and growth fits over double cosets.
    Equidist(EquidistArgs),
    /// Run acceptance criteria.
    Check {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
}

#[derive(Args, Debug)]
struct GroupArg {
    #[arg(long, default_value_t = 3)]
    q: i64,
}

#[derive(Args, Debug)]
struct EquidistArgs {
    #[command(flatten)]
    group: GroupArg,
    #[arg(long)]
    xmax: f64,
    /// Frequencies for the Weyl sums.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,2,3")]
    n: Vec<i64>,
    /// Write the coset table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the Weyl sum series as CSV.
    #[arg(long)]
    series_csv: Option<PathBuf>,
    /// Discrepancy checkpoints; defaults to a √2-spaced grid.
    #[arg(long, value_delimiter = ',')]
    checkpoints: Vec<f64>,
    /// Word-length guard for q > 3.
    #[arg(long)]
    max_depth: Option<usize>,
    /// Exit with status 1 if an acceptance threshold is violated.
    #[arg(long)]
    strict: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    A,
    B,
    Both,
}

/// Exit status 1: a check or threshold failed.
#[derive(Debug)]
struct CheckFailed;

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "check failed")
    }
}

impl std::error::Error for CheckFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out::new(cli.json);
    match run(&cli, &mut out) {
        Ok(()) => {
            out.finish();
            ExitCode::SUCCESS
        }
        Err(e) if e.downcast_ref::<CheckFailed>().is_some() => {
            out.finish();
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = matches!(
                e.downcast_ref::<Error>(),
                Some(
                    Error::Parse { .. }
                        | Error::NotCoprime { .. }
                        | Error::DeterminantNotOne
                        | Error::InvalidQ(_)
                        | Error::ZeroLowerLeft
                        | Error::TrivialDoubleCoset
                        | Error::DivisionByZero
                )
            );
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli, out: &mut Out) -> anyhow::Result<()> {
    let bits = cli.bits;
    match &cli.command {
        Command::Sum { a, c, naive, .. } => {
            let p = CoprimePair::new(*a, *c)?;
            let (value, algorithm) = if *naive {
                (dedekind_sum_naive(&p), "naive")
            } else {
                (dedekind_sum_fast(&p), "fast")
            };
            let mut j = rational_json(&value);
            j["algorithm"] = json!(algorithm);
            out.value(j, format_rational(&value));
        }
        Command::Phi { a, b, c, d } => {
            let m = IntegerMatrix::new(*a, *b, *c, *d)?;
            let value = rademacher_phi(&m);
            out.value(rational_json(&value), format_rational(&value));
        }
        Command::Omega { group, g, h } => {
            let grp = HeckeGroup::new(group.q)?;
            let g = GroupElement::parse(grp.field(), g).context("--g")?;
            let h = GroupElement::parse(grp.field(), h).context("--h")?;
            let w = omega(&g, &h)?;
            out.value(
                json!({ "exact": w.to_string(), "float": w.to_f64(), "q": grp.q() }),
                w.to_string(),
            );
        }
        Command::Symbol {
            group,
            word,
            row,
            unnormalized,
            algorithm,
        } => symbol(group.q, word.as_deref(), row.as_deref(), *unnormalized, *algorithm, bits, out)?,
        Command::Member { group, matrix } => {
            let grp = HeckeGroup::new(group.q)?;
            let m = GroupElement::parse(grp.field(), matrix).context("--matrix")?;
            match grp.membership(&m)? {
                Some(w) => out.value(
                    json!({ "exact": w.to_string(), "float": null, "q": grp.q(), "member": true }),
                    w.to_string(),
                ),
                None => out.value(
                    json!({ "exact": null, "float": null, "q": grp.q(), "member": false }),
                    "not-member".to_owned(),
                ),
            }
        }
        Command::Reduce { group, row } => {
            let grp = HeckeGroup::new(group.q)?;
            let row = DoubleCosetRow::parse(grp.field(), row).context("--row")?;
            let trace = grp.rosen_reduce(&row)?;
            let steps: Vec<Value> = trace
                .steps
                .iter()
                .zip(&trace.rows)
                .map(|(s, r)| json!({ "step": s.to_string(), "row": r.to_string() }))
                .collect();
            let mut text = format!("start {}", trace.start);
            for (s, r) in trace.steps.iter().zip(&trace.rows) {
                text.push_str(&format!("\n{:<6} {r}", s.to_string()));
            }
            text.push_str(&format!("\nword {}", row_to_word(&trace)));
            out.value(
                json!({
                    "exact": trace.terminal().to_string(),
                    "float": null,
                    "q": grp.q(),
                    "steps": steps,
                    "word": row_to_word(&trace).to_string(),
                }),
                text,
            );
        }
        Command::Equidist(args) => equidist(args, bits, out)?,
        Command::Check { suite } => {
            let outcomes = checks::run_suite(*suite);
            let all = outcomes.iter().all(|o| o.passed);
            for o in &outcomes {
                out.record(
                    json!({
                        "criterion": o.id,
                        "name": o.name,
                        "passed": o.passed,
                        "detail": o.detail,
                    }),
                    format!(
                        "{:>2}  {:<4}  {:<28}  {}",
                        o.id,
                        if o.passed { "PASS" } else { "FAIL" },
                        o.name,
                        o.detail
                    ),
                );
            }
            if !all {
                return Err(CheckFailed.into());
            }
        }
    }
    Ok(())
}

fn format_rational(r: &Rational) -> String {
    dedesym_core::field::format_rational(r)
}

fn symbol(
    q: i64,
    word: Option<&str>,
    row: Option<&str>,
    unnormalized: bool,
    algorithm: Algorithm,
    bits: u32,
    out: &mut Out,
) -> anyhow::Result<()> {
    let grp = HeckeGroup::new(q)?;
    let (word, row) = match (word, row) {
        (Some(w), _) => {
            let w = Word::parse(w).context("--word")?;
            let m = grp.word_to_matrix(&w);
            if m.element().c().is_zero() {
                return Err(Error::TrivialDoubleCoset.into());
            }
            let row = m.row()?;
            (w, row)
        }
        (None, Some(r)) => {
            let mut row = DoubleCosetRow::parse(grp.field(), r).context("--row")?;
            if unnormalized {
                row = DoubleCosetRow::new(row.c() * grp.lambda(), row.d().clone())?;
            }
            let trace = grp.rosen_reduce(&row)?;
            (row_to_word(&trace), row)
        }
        (None, None) => bail!("one of --word or --row is required"),
    };
    let a = matches!(algorithm, Algorithm::A | Algorithm::Both)
        .then(|| grp.symbol_from_word(&word))
        .transpose()?;
    let b = matches!(algorithm, Algorithm::B | Algorithm::Both)
        .then(|| grp.symbol_descent(&row))
        .transpose()?;
    let value: &SymbolValue = a.as_ref().or(b.as_ref()).expect("an algorithm ran");
    let agree = match (&a, &b) {
        (Some(x), Some(y)) => Some(x == y),
        _ => None,
    };
    let mut j = exact_json(value.value(), bits);
    let mut text = value.to_string();
    let coords = value.coords();
    if coords.iter().skip(2).all(|c| c.numer() == &0.into()) {
        let (r, s) = (value.value().coord(0), value.value().coord(1));
        text.push_str(&format!("\nr = {}, s = {}", format_rational(&r), format_rational(&s)));
        j["r"] = json!(format_rational(&r));
        j["s"] = json!(format_rational(&s));
    }
    j["coords"] = json!(coords.iter().map(format_rational).collect::<Vec<_>>());
    j["algorithm"] = json!(format!("{algorithm:?}").to_lowercase());
    j["word"] = json!(word.to_string());
    if let Some(agree) = agree {
        text.push_str(&format!("\nalgorithms_agree: {agree}"));
        j["algorithms_agree"] = json!(agree);
    }
    out.value(j, text);
    if agree == Some(false) {
        return Err(CheckFailed.into());
    }
    Ok(())
}

fn equidist(args: &EquidistArgs, bits: u32, out: &mut Out) -> anyhow::Result<()> {
    let q = args.group.q;
    let opts = EnumerateOptions {
        bits,
        max_depth: args.max_depth,
    };
    let table = enumerate_with(q, args.xmax, opts)?;
    if let Some(path) = &args.csv {
        table.export_csv(path)?;
    }
    let checkpoints = if args.checkpoints.is_empty() {
        geometric_checkpoints((args.xmax / 16.0).max(1.0), args.xmax)
    } else {
        args.checkpoints.clone()
    };
    let mut violated = Vec::new();

    let mut disc = Vec::new();
    for &x in &checkpoints {
        let sub = table.restrict(x);
        let d = if sub.is_empty() { 1.0 } else { discrepancy(&sub.mod1_values())? };
        disc.push((x, sub.len(), d));
    }
    let monotone = disc
        .windows(2)
        .all(|w| w[1].2 <= w[0].2 * (1.0 + checks::DISCREPANCY_JITTER));
    let last = disc.last().map_or(1.0, |d| d.2);
    if last >= checks::DISCREPANCY_MAX {
        violated.push(format!("discrepancy {last:.4} >= {}", checks::DISCREPANCY_MAX));
    }
    if !monotone {
        violated.push("discrepancy not monotone".to_owned());
    }

    let series: Vec<WeylSumSeries> = args
        .n
        .iter()
        .map(|&n| WeylSumSeries::from_table(&table, n, &checkpoints))
        .collect();
    for s in &series {
        if let Some(fit) = s.fit {
            if s.n != 0 && fit.exponent > checks::WEYL_EXPONENT_MAX {
                violated.push(format!("|W_{}| exponent {:.3} > {}", s.n, fit.exponent, checks::WEYL_EXPONENT_MAX));
            }
        }
    }
    let counts: Vec<(f64, f64)> = disc.iter().map(|&(x, n, _)| (x, n as f64)).collect();
    let count_fit = growth_fit(&counts).ok();
    if let Some(fit) = count_fit {
        if (fit.exponent - checks::COUNT_EXPONENT).abs() > checks::COUNT_EXPONENT_TOLERANCE {
            violated.push(format!("count exponent {:.3}", fit.exponent));
        }
    }
    if let Some(path) = &args.series_csv {
        write_series_csv(&series, path)?;
    }

    let mut text = format!(
        "q={} X={} |D_X|={}{}",
        table.q(),
        args.xmax,
        table.len(),
        if table.is_complete() { "" } else { " (incomplete: depth guard hit)" }
    );
    text.push_str("\nX        count      discrepancy");
    for (x, n, d) in &disc {
        text.push_str(&format!("\n{x:<8} {n:<10} {d:.6}"));
    }
    for s in &series {
        let last = s.values.last().map_or(0.0, |v| v.1.norm());
        let fit = s.fit.map_or("n/a".to_owned(), |f| format!("{:.3}", f.exponent));
        text.push_str(&format!("\nn={:<3} |W_n(X)|={last:.3} exponent {fit}", s.n));
    }
    if let Some(fit) = count_fit {
        text.push_str(&format!(
            "\ncount exponent {:.3} constant {:.4} (V/4pi = {})",
            fit.exponent,
            fit.constant,
            HeckeGroup::new(q)?.kappa()
        ));
    }
    for v in &violated {
        text.push_str(&format!("\nthreshold violated: {v}"));
    }

    let j = json!({
        "q": table.q(),
        "X": args.xmax,
        "count": table.len(),
        "complete": table.is_complete(),
        "discrepancy": disc.iter().map(|(x, n, d)| json!({ "X": x, "count": n, "value": d })).collect::<Vec<_>>(),
        "weyl": series.iter().map(|s| json!({
            "n": s.n,
            "values": s.values.iter().map(|(x, v)| json!({ "X": x, "re": v.re, "im": v.im, "abs": v.norm() })).collect::<Vec<_>>(),
            "exponent": s.fit.map(|f| f.exponent),
        })).collect::<Vec<_>>(),
        "count_exponent": count_fit.map(|f| f.exponent),
        "count_constant": count_fit.map(|f| f.constant),
        "violations": violated,
    });
    out.value(j, text);
    if args.strict && !violated.is_empty() {
        return Err(CheckFailed.into());
    }
    Ok(())
}
