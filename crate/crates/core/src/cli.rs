//! Command-line front end. Exit codes are part of the interface:
//! 0 equal, 1 not equal, 2 unknown, 3 usage or parse error, 4 magnitude
//! overflow, 5 I/O failure, 6 corrupt checkpoint.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::equality::{solve_gamma, Outcome, Verdict, DEFAULT_MAX_BITS};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::interval::eval_pownum;
use crate::parser::{parse, parse_equation, parse_pownum, SyntaxTree};
use crate::search::{family_scan, run_search, summary_text, SearchConfig};
use crate::tower::{format_exponent, print_canonical};

pub const EXIT_EQUAL: i32 = 0;
pub const EXIT_NOT_EQUAL: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_MAGNITUDE: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_CHECKPOINT: i32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "powertower",
    version,
    about = "Exact arithmetic and search for power-tower product equations"
)]
pub struct Cli {
    /// Prime base B; every literal must be an integer power of it.
    #[arg(long, global = true, default_value_t = 2)]
    base: u64,
    /// Interval precision budget in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_BITS, value_parser = clap::value_parser!(u64).range(16..))]
    bits: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide an equation such as "2^^3 * 2^^3 = 4^^2".
    Verify { equation: String },
    /// Print a rigorous decimal enclosure and the canonical form.
    Eval { expr: String },
    /// Print the canonical form of an expression.
    Canon { expr: String },
    /// Search a rational grid for solutions at fixed heights.
    Search {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 4)]
        max_num: u64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        max_den: u64,
        /// Directory for results, unknowns, checkpoint and summary.
        #[arg(long, default_value = "search-out")]
        out: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        workers: u64,
        /// Report (a, b) and (b, a) separately even when k = m.
        #[arg(long)]
        no_dedup: bool,
        /// Process at most this many grid cells, then stop (resumable).
        #[arg(long)]
        stop_after: Option<u64>,
    },
    /// Scan the family (q, q, 2q) over a grid of q.
    FamilyScan {
        /// Heights as k,m,n.
        #[arg(long, value_parser = parse_heights)]
        heights: (i64, i64, i64),
        #[arg(long, default_value_t = 20)]
        max_num: u64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
        max_den: u64,
    },
    /// Solve for c given a, b and the heights.
    SolveGamma {
        #[arg(long, allow_hyphen_values = true)]
        a: Rational,
        #[arg(long, allow_hyphen_values = true)]
        b: Rational,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
    },
}

fn parse_heights(s: &str) -> std::result::Result<(i64, i64, i64), String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match parts.as_slice() {
        [k, m, n] => Ok((*k, *m, *n)),
        _ => Err(format!("expected three heights k,m,n, got {s:?}")),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Magnitude(_) => EXIT_MAGNITUDE,
        Error::Io(_) => EXIT_IO,
        Error::CorruptCheckpoint(_) => EXIT_CHECKPOINT,
        _ => EXIT_USAGE,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "SyntaxError",
        Error::Height { .. } => "HeightError",
        Error::AtomNotPowerOfBase { .. } => "AtomNotPowerOfBase",
        Error::Lowering(_) => "LoweringError",
        Error::Magnitude(_) => "MagnitudeError",
        Error::Io(_) => "IoError",
        Error::CorruptCheckpoint(_) => "CorruptCheckpoint",
        Error::UnsupportedShape(_) => "UnsupportedShape",
        Error::BaseNotSupported(_) => "BaseNotSupported",
        Error::Domain(_) => "DomainError",
        _ => "Error",
    }
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({ "error": error_kind(e), "message": e.to_string() });
    if let Error::Syntax { line, column, .. } | Error::Height { line, column, .. } = e {
        v["line"] = json!(line);
        v["column"] = json!(column);
    }
    v
}

fn verdict_code(v: &Verdict) -> i32 {
    match v.outcome {
        Outcome::Equal => EXIT_EQUAL,
        Outcome::NotEqual => EXIT_NOT_EQUAL,
        Outcome::Unknown => EXIT_UNKNOWN,
    }
}

struct Ctx<'a> {
    base: u64,
    bits: u64,
    format: Format,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str, value: Value) -> Result<()> {
        match self.format {
            Format::Text => write!(self.out, "{text}")?,
            Format::Json => writeln!(self.out, "{value}")?,
        }
        Ok(())
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_EQUAL
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let format = cli.format;
    let mut ctx = Ctx {
        base: cli.base,
        bits: cli.bits,
        format,
        out,
    };
    match dispatch(&mut ctx, cli.command) {
        Ok(code) => code,
        Err(e) => {
            let _ = match format {
                Format::Text => writeln!(err, "error: {e}"),
                Format::Json => writeln!(ctx.out, "{}", error_json(&e)),
            };
            exit_code(&e)
        }
    }
}

fn dispatch(ctx: &mut Ctx<'_>, cmd: Command) -> Result<i32> {
    crate::exact::check_base(ctx.base)?;
    match cmd {
        Command::Verify { equation } => cmd_verify(ctx, &equation),
        Command::Eval { expr } => cmd_eval(ctx, &expr),
        Command::Canon { expr } => {
            let x = parse_pownum(&expr, ctx.base)?;
            let c = print_canonical(&x);
            ctx.emit(&format!("{c}\n"), json!({ "input": expr, "canonical": c }))?;
            Ok(EXIT_EQUAL)
        }
        Command::Search {
            k,
            m,
            n,
            max_num,
            max_den,
            out,
            workers,
            no_dedup,
            stop_after,
        } => {
            let mut cfg = SearchConfig::new(ctx.base, k, m, n, max_num, max_den, out);
            cfg.interval_bits = ctx.bits;
            cfg.workers = workers as usize;
            cfg.dedup_symmetric = !no_dedup;
            cfg.stop_after = stop_after;
            let report = run_search(&cfg)?;
            let st = &report.stats;
            let text = if report.complete {
                summary_text(&cfg, &report)
            } else {
                format!(
                    "stopped after {} of {} cells; rerun the same command to resume\n",
                    st.cells_processed, st.cells_total
                )
            };
            let nontrivial: Vec<Value> = report
                .nontrivial()
                .map(|r| json!({ "a": r.a, "b": r.b, "c": r.c, "method": r.method }))
                .collect();
            ctx.emit(
                &text,
                json!({
                    "complete": report.complete,
                    "output": cfg.output.display().to_string(),
                    "cells_total": st.cells_total,
                    "cells_processed": st.cells_processed,
                    "trivial": st.trivial,
                    "nontrivial": nontrivial,
                    "unknowns": st.unknown,
                }),
            )?;
            Ok(EXIT_EQUAL)
        }
        Command::FamilyScan {
            heights,
            max_num,
            max_den,
        } => {
            let scan = family_scan(ctx.base, heights, max_num, max_den, ctx.bits)?;
            let list = |v: &[Rational]| {
                v.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let (k, m, n) = heights;
            let text = format!(
                "family (q, q, 2q) at heights ({k}, {m}, {n}), |p| <= {max_num}, q <= {max_den}\nsolutions: {{{}}}\nunknown: {{{}}}\n",
                list(&scan.solutions),
                list(&scan.unknowns)
            );
            ctx.emit(&text, json!({ "heights": [k, m, n], "solutions": scan.solutions, "unknowns": scan.unknowns }))?;
            Ok(EXIT_EQUAL)
        }
        Command::SolveGamma { a, b, k, m, n } => {
            let sols = solve_gamma(ctx.base, &a, &b, k, m, n)?;
            let text = if sols.is_empty() {
                "no rational c\n".to_string()
            } else {
                sols.iter().map(|c| format!("c = {c}\n")).collect()
            };
            ctx.emit(
                &text,
                json!({ "a": a, "b": b, "k": k, "m": m, "n": n, "solutions": sols }),
            )?;
            Ok(EXIT_EQUAL)
        }
    }
}

fn cmd_verify(ctx: &mut Ctx<'_>, text: &str) -> Result<i32> {
    let tree = parse(text)?;
    if !matches!(tree, SyntaxTree::Equation(..)) {
        return Err(Error::Lowering(
            "verify expects an equation 'lhs = rhs'".into(),
        ));
    }
    let eq = parse_equation(text, ctx.base)?;
    let v = eq.verify(ctx.bits);
    let (lhs, rhs) = (print_canonical(&eq.lhs), print_canonical(&eq.rhs));
    let instance = eq
        .instance
        .as_ref()
        .map(|i| json!({ "a": i.a, "b": i.b, "c": i.c, "k": i.k, "m": i.m, "n": i.n }));
    let report = format!(
        "{} ({})\n  lhs: {lhs}\n  rhs: {rhs}\n  trace: {}\n",
        v.outcome, v.method, v.detail
    );
    ctx.emit(
        &report,
        json!({
            "input": text,
            "base": ctx.base,
            "outcome": v.outcome,
            "method": v.method,
            "detail": v.detail,
            "width_log2": v.width_log2,
            "lhs": lhs,
            "rhs": rhs,
            "instance": instance,
        }),
    )?;
    Ok(verdict_code(&v))
}

fn cmd_eval(ctx: &mut Ctx<'_>, text: &str) -> Result<i32> {
    let x = parse_pownum(text, ctx.base)?;
    let iv = eval_pownum(&x, ctx.bits)?;
    let digits = ((ctx.bits as f64 * std::f64::consts::LOG10_2) as usize).clamp(6, 80);
    let enclosure = iv.to_decimal_string(digits);
    let canonical = print_canonical(&x);
    let exponent = format_exponent(x.exponent(), ctx.base);
    let report = format!(
        "{enclosure}\n  canonical: {canonical}\n  bits: {}\n",
        ctx.bits
    );
    ctx.emit(
        &report,
        json!({
            "input": text,
            "base": ctx.base,
            "bits": ctx.bits,
            "enclosure": enclosure,
            "canonical": canonical,
            "exponent": exponent,
        }),
    )?;
    Ok(EXIT_EQUAL)
}
