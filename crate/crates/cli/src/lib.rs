//! Command-line front end. [`run`] parses arguments, writes results to
//! `out` and diagnostics to `err`, and returns the process exit status.

use std::fmt::Display;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use curling::analysis::{
    beta_closed_form, build_length_table, check_rec1, records, rho_closed_form, sigma_through_class, smooth_to_ruler,
    Validity,
};
use curling::hierarchy::{
    self, decompose, generate_fast, generate_reference, glue_lengths_via_promotion, verify_structure,
};
use curling::kernel::curling_transform;
use curling::occurrence::{first_five_chain, first_occurrence_direct, tower_estimate, FirstOccurrence, Position};
use curling::search::{self, exhaustive_search, Rounding, SearchRow};
use curling::sequences::{generate_named, variant_2d, variant_floor_half, variant_greedy, variant_shift};
use curling::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest search length accepted without `--long-run`.
pub const SEARCH_STANDARD_MAX: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "curling", version, about = "Curling number sequences and their hierarchy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Bfile,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Engine {
    Reference,
    Fast,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableKind {
    Beta,
    Sigma,
    Tau,
    Records,
    Rho,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyKind {
    Structure,
    Rec1,
    Closedforms,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantKind {
    Floorhalf,
    Shift,
    Greedy,
    #[value(name = "2d")]
    TwoD,
}

#[derive(Debug, Args)]
struct Level {
    #[arg(long, default_value_t = 1)]
    m: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// First terms of A(m).
    Generate {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Engine::Fast)]
        engine: Engine,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Curling transform of a file (b-file or whitespace-separated terms) or
    /// of `named:<sequence>`.
    Transform {
        #[arg(long)]
        input: String,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Blocks and glue strings of level m.
    Decompose {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        blocks: usize,
        #[arg(long, default_value_t = hierarchy::DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Glue lengths sigma(1..=count) of level m.
    Glue {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Length tables, records and smoothed records.
    Table {
        #[arg(long, value_enum)]
        which: TableKind,
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Structural checks; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum)]
        which: VerifyKind,
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = hierarchy::DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// First position of t in A.
    First {
        #[arg(long)]
        t: u64,
        /// Follow the first 5 down the hierarchy through exact anchors.
        #[arg(long)]
        exact_chain: bool,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Exhaustive search over starting strings of 2s and 3s.
    Search {
        #[arg(long, required_unless_present = "n_max")]
        n: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = search::DEFAULT_BUDGET)]
        budget: usize,
        /// Allow lengths above 20.
        #[arg(long)]
        long_run: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Variations on the curling recurrence.
    Variant {
        #[arg(long, value_enum)]
        which: VariantKind,
        /// Terms, or columns for the 2-D table.
        #[arg(long)]
        count: usize,
        /// Rows of the 2-D table.
        #[arg(long, default_value_t = 6)]
        rows: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Failed(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EmptyWord
            | Error::NonPositiveTerm { .. }
            | Error::InvalidLevel
            | Error::UnknownSequence(_)
            | Error::InvalidAlphabet { .. }
            | Error::InvalidArgument(_)
            | Error::TowerTooSmall(_)
            | Error::ValuationUndefined
            | Error::ValuationBase(_) => Failure::Usage(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the command line `args` (including the program name).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = dispatch(cli.command, out, err).and_then(|()| out.flush().map_err(Failure::Io));
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(err, "failed: {msg}");
            EXIT_FAILED
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "i/o error: {e}");
            EXIT_FAILED
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Generate {
            level,
            count,
            engine,
            format,
        } => {
            let word = match engine {
                Engine::Reference => generate_reference::<u32>(level.m, count)?,
                Engine::Fast => generate_fast::<u32>(level.m, count)?,
            };
            write_sequence(out, "a", &word, format)
        }
        Command::Transform { input, count, format } => {
            let terms = read_input(&input, count)?;
            let t: Vec<u32> = curling_transform(&terms);
            write_sequence(out, "c", &t, format)
        }
        Command::Decompose {
            level,
            blocks,
            budget,
            format,
        } => decompose_cmd(out, level.m, blocks, budget, format),
        Command::Glue { level, count, format } => {
            let sigma = glue_lengths_via_promotion(level.m, count)?;
            write_sequence(out, "sigma", &sigma, format)
        }
        Command::Table {
            which,
            level,
            n,
            format,
        } => table_cmd(out, which, level.m, n, format),
        Command::Verify {
            which,
            level,
            n,
            budget,
            format,
        } => verify_cmd(out, which, level.m, n, budget, format),
        Command::First {
            t,
            exact_chain,
            budget,
            format,
        } => first_cmd(out, t, exact_chain, budget, format),
        Command::Search {
            n,
            n_max,
            workers,
            budget,
            long_run,
            format,
        } => search_cmd(out, err, n, n_max, workers, budget, long_run, format),
        Command::Variant {
            which,
            count,
            rows,
            format,
        } => match which {
            VariantKind::Floorhalf => write_sequence(out, "a", &variant_floor_half(count), format),
            VariantKind::Shift => write_sequence(out, "a", &variant_shift(count), format),
            VariantKind::Greedy => write_sequence(out, "g", &variant_greedy(count), format),
            VariantKind::TwoD => {
                if rows == 0 || count == 0 {
                    return Err(Failure::Usage("the 2-D table needs at least one row and column".into()));
                }
                write_grid(out, &variant_2d(rows, count)?, format)
            }
        },
    }
}

/// Terms from `named:<sequence>` or a file holding either a b-file or
/// whitespace-separated terms. Lines starting with `#` are ignored.
fn read_input(input: &str, count: Option<usize>) -> std::result::Result<Vec<u32>, Failure> {
    let mut terms = if let Some(name) = input.strip_prefix("named:") {
        let count = count.ok_or_else(|| Failure::Usage("named inputs need --count".into()))?;
        generate_named(name, count)?.terms
    } else {
        let text = std::fs::read_to_string(PathBuf::from(input))
            .map_err(|e| Failure::Usage(format!("cannot read {input}: {e}")))?;
        parse_terms(&text).map_err(Failure::Usage)?
    };
    if let Some(c) = count {
        if c > terms.len() {
            return Err(Failure::Usage(format!("input has only {} terms", terms.len())));
        }
        terms.truncate(c);
    }
    Ok(terms)
}

/// Parses a b-file (`n a(n)` per line with consecutive `n`) or plain
/// whitespace-separated terms.
pub fn parse_terms(text: &str) -> std::result::Result<Vec<u32>, String> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let parse = |tok: &str| tok.parse::<u32>().map_err(|e| format!("bad term {tok:?}: {e}"));
    let pairs: Option<Vec<(&str, &str)>> = lines
        .iter()
        .map(|l| {
            let mut it = l.split_whitespace();
            match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => Some((a, b)),
                _ => None,
            }
        })
        .collect();
    if let Some(pairs) = pairs.filter(|p| !p.is_empty()) {
        let first: Option<u64> = pairs[0].0.parse().ok();
        let consecutive = first.is_some_and(|f| {
            pairs
                .iter()
                .enumerate()
                .all(|(i, (n, _))| n.parse::<u64>().ok() == Some(f + i as u64))
        });
        if consecutive {
            return pairs.iter().map(|(_, v)| parse(v)).collect();
        }
    }
    lines.iter().flat_map(|l| l.split_whitespace()).map(parse).collect()
}

fn json_number(v: &dyn Display) -> Value {
    let s = v.to_string();
    match s.parse::<u64>() {
        Ok(x) => Value::from(x),
        Err(_) => Value::String(s),
    }
}

fn write_json(out: &mut dyn Write, v: &Value) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| Failure::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

/// Writes `values` as terms `1, 2, ..` of a sequence.
fn write_sequence<T: Display>(out: &mut dyn Write, column: &str, values: &[T], format: Format) -> Outcome {
    write_indexed(out, column, 1, values, format)
}

fn write_indexed<T: Display>(
    out: &mut dyn Write,
    column: &str,
    offset: usize,
    values: &[T],
    format: Format,
) -> Outcome {
    match format {
        Format::Plain => {
            for line in values.chunks(20) {
                let parts: Vec<String> = line.iter().map(ToString::to_string).collect();
                writeln!(out, "{}", parts.join(" "))?;
            }
        }
        Format::Bfile => {
            for (i, v) in values.iter().enumerate() {
                writeln!(out, "{} {}", i + offset, v)?;
            }
        }
        Format::Csv => {
            writeln!(out, "n,{column}")?;
            for (i, v) in values.iter().enumerate() {
                writeln!(out, "{},{}", i + offset, v)?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = values
                .iter()
                .enumerate()
                .map(|(i, v)| json!({ "n": i + offset, column: json_number(v) }))
                .collect();
            write_json(out, &Value::Array(rows))?;
        }
    }
    Ok(())
}

fn write_grid(out: &mut dyn Write, grid: &[Vec<u32>], format: Format) -> Outcome {
    match format {
        Format::Json => write_json(out, &json!(grid)),
        Format::Csv => {
            for row in grid {
                let parts: Vec<String> = row.iter().map(u32::to_string).collect();
                writeln!(out, "{}", parts.join(","))?;
            }
            Ok(())
        }
        Format::Plain | Format::Bfile => {
            for row in grid {
                let parts: Vec<String> = row.iter().map(u32::to_string).collect();
                writeln!(out, "{}", parts.join(" "))?;
            }
            Ok(())
        }
    }
}

fn decompose_cmd(out: &mut dyn Write, m: usize, blocks: usize, budget: usize, format: Format) -> Outcome {
    let (d, exhausted) = match decompose::<u32>(m, blocks, budget) {
        Ok(d) => (d, None),
        Err(e) => {
            let msg = e.to_string();
            (e.partial, Some(msg))
        }
    };
    match format {
        Format::Json => {
            let glues: Vec<Vec<u32>> = d.glues.iter().map(|g| g.to_vec()).collect();
            let block_lengths: Vec<usize> = d.blocks.iter().map(|b| b.len()).collect();
            write_json(out, &json!({ "m": m, "block_lengths": block_lengths, "glues": glues }))?;
        }
        _ => {
            for (i, b) in d.blocks.iter().enumerate() {
                writeln!(out, "B{} length {}", i + 1, b.len())?;
                if let Some(g) = d.glues.get(i) {
                    writeln!(out, "S{} {}", i + 1, g)?;
                }
            }
        }
    }
    match exhausted {
        Some(msg) => Err(Failure::Failed(msg)),
        None => Ok(()),
    }
}

fn table_cmd(out: &mut dyn Write, which: TableKind, m: usize, n: usize, format: Format) -> Outcome {
    match which {
        TableKind::Beta | TableKind::Sigma | TableKind::Tau => {
            let table = build_length_table(m, n)?;
            match which {
                TableKind::Beta => write_sequence(out, "beta", &table.beta, format),
                TableKind::Sigma => write_sequence(out, "sigma", &table.sigma, format),
                _ => write_sequence(out, "tau", &table.tau, format),
            }
        }
        TableKind::Records | TableKind::Rho => {
            let j = u32::try_from(n).map_err(|_| Failure::Usage("--n too large".into()))?;
            let sigma = sigma_through_class(m, j)?;
            if let TableKind::Records = which {
                let pi: Vec<u64> = records(&sigma).iter().map(|r| r.value).take(n + 1).collect();
                write_indexed(out, "pi", 0, &pi, format)
            } else {
                let fit = smooth_to_ruler(m, &sigma);
                if !fit.mismatches.is_empty() {
                    return Err(Failure::Failed(format!(
                        "smoothing failed at glues {:?}",
                        fit.mismatches
                    )));
                }
                let rho: Vec<u64> = fit.rho.iter().copied().take(n + 1).collect();
                write_indexed(out, "rho", 0, &rho, format)
            }
        }
    }
}

struct Check {
    label: String,
    expected: String,
    found: String,
}

impl Check {
    fn holds(&self) -> bool {
        self.expected == self.found
    }
}

fn verify_cmd(out: &mut dyn Write, which: VerifyKind, m: usize, n: usize, budget: usize, format: Format) -> Outcome {
    let checks: Vec<Check> = match which {
        VerifyKind::Structure => verify_structure(m, n, budget)?
            .checks
            .into_iter()
            .map(|c| Check {
                label: format!("{:?} m={} n={}", c.clause, c.m, c.n),
                expected: "true".into(),
                found: c.holds.to_string(),
            })
            .collect(),
        VerifyKind::Rec1 => {
            let report = check_rec1(m, n)?;
            let base = Check {
                label: "rho(0)".into(),
                expected: "1".into(),
                found: if report.base_holds { "1" } else { "other" }.into(),
            };
            std::iter::once(base)
                .chain(report.rows.into_iter().map(|r| Check {
                    label: format!("rho({}) m={}", r.n + 1, m),
                    expected: r.rhs.to_string(),
                    found: r.lhs.to_string(),
                }))
                .collect()
        }
        VerifyKind::Closedforms => closed_form_checks(m, n)?,
    };
    let failures = checks.iter().filter(|c| !c.holds()).count();
    match format {
        Format::Json => {
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| json!({ "check": c.label, "expected": c.expected, "found": c.found, "holds": c.holds() }))
                .collect();
            write_json(out, &json!({ "checks": rows, "failures": failures }))?;
        }
        _ => {
            for c in &checks {
                let status = if c.holds() { "ok" } else { "FAIL" };
                writeln!(out, "{status} {} expected {} found {}", c.label, c.expected, c.found)?;
            }
            writeln!(out, "{} checks, {failures} failures", checks.len())?;
        }
    }
    if failures > 0 {
        return Err(Failure::Failed(format!("{failures} of {} checks failed", checks.len())));
    }
    Ok(())
}

/// Block lengths for `1 <= i <= min(n, (m+1)^2 - 1)` and smoothed records
/// for `0 <= i <= min(n, (m+2)^2 - 1)` against their closed forms.
fn closed_form_checks(m: usize, n: usize) -> std::result::Result<Vec<Check>, Failure> {
    if m == 0 {
        return Err(Error::InvalidLevel.into());
    }
    let mut checks = Vec::new();
    let beta_max = n.min((m + 1) * (m + 1) - 1);
    let table = build_length_table(m, beta_max.max(1))?;
    for i in 1..=beta_max {
        let form = beta_closed_form(m, i);
        debug_assert_eq!(form.validity, Validity::Exact);
        checks.push(Check {
            label: format!("beta({i}) m={m}"),
            expected: table.beta(i).expect("in table").to_string(),
            found: form.value.to_string(),
        });
    }
    let rho_max = n.min((m + 2) * (m + 2) - 1);
    let sigma = sigma_through_class(m, rho_max as u32)?;
    let fit = smooth_to_ruler(m, &sigma);
    for i in 0..=rho_max {
        let form = rho_closed_form(m, i)?;
        checks.push(Check {
            label: format!("rho({i}) m={m}"),
            expected: fit.rho.get(i).map_or("missing".into(), u64::to_string),
            found: form.value.to_string(),
        });
    }
    Ok(checks)
}

fn first_cmd(out: &mut dyn Write, t: u64, exact_chain: bool, budget: u64, format: Format) -> Outcome {
    if exact_chain {
        if t != 5 {
            return Err(Failure::Usage("--exact-chain is only defined for --t 5".into()));
        }
        let report = first_five_chain()?;
        let loglog = report.loglog10_level_one().expect("level one present");
        if format == Format::Json {
            let positions: Vec<Value> = report
                .positions
                .iter()
                .map(|p| match &p.position {
                    Position::Exact(x) => json!({ "m": p.m, "position": json_number(x) }),
                    Position::LogLog10(v) => json!({ "m": p.m, "loglog10": v }),
                })
                .collect();
            return write_json(
                out,
                &json!({
                    "t": report.t,
                    "positions": positions,
                    "anchor_index": report.anchor_index,
                    "mu": report.mu,
                    "epsilon": report.epsilon,
                }),
            );
        }
        for p in &report.positions {
            match &p.position {
                Position::Exact(x) => writeln!(out, "x({}) = {x}", p.m)?,
                Position::LogLog10(v) => writeln!(out, "x({}) ~ 10^10^{v:.4}", p.m)?,
            }
        }
        writeln!(out, "anchor i = {}", report.anchor_index)?;
        writeln!(out, "mu = {:.4}", report.mu)?;
        writeln!(out, "epsilon = {:.5}", report.epsilon)?;
        writeln!(out, "loglog10 x(1) = {loglog:.4}")?;
        return Ok(());
    }
    if t >= 5 {
        let tower = tower_estimate(t)?;
        let loglog = tower.loglog10.map_or("overflow".to_string(), |v| format!("{v:.4}"));
        if format == Format::Json {
            return write_json(
                out,
                &json!({ "t": t, "tower": tower.to_string(), "loglog10": tower.loglog10 }),
            );
        }
        writeln!(out, "first {t} near {tower}")?;
        writeln!(out, "loglog10 = {loglog}")?;
        return Ok(());
    }
    match first_occurrence_direct(t, 1, budget)? {
        FirstOccurrence::Found(p) => {
            if format == Format::Json {
                write_json(out, &json!({ "t": t, "position": p }))
            } else {
                writeln!(out, "{p}")?;
                Ok(())
            }
        }
        FirstOccurrence::NotFound { budget } => {
            Err(Failure::Failed(format!("{t} not found in the first {budget} terms")))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn search_cmd(
    out: &mut dyn Write,
    err: &mut dyn Write,
    n: Option<usize>,
    n_max: Option<usize>,
    workers: Option<usize>,
    budget: usize,
    long_run: bool,
    format: Format,
) -> Outcome {
    let lo = n.unwrap_or(1);
    let hi = n_max.unwrap_or(lo);
    if lo == 0 || hi < lo {
        return Err(Failure::Usage(format!("empty length range {lo}..={hi}")));
    }
    if hi > SEARCH_STANDARD_MAX && !long_run {
        return Err(Failure::Usage(format!(
            "lengths above {SEARCH_STANDARD_MAX} need --long-run"
        )));
    }
    let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |w| w.get()));
    if workers == 0 {
        return Err(Failure::Usage("--workers must be positive".into()));
    }
    let mut rows: Vec<SearchRow> = Vec::new();
    for len in lo..=hi {
        let row = exhaustive_search(len, workers, budget)?;
        for w in &row.budget_hits {
            writeln!(err, "budget {budget} exhausted for start {}", search::render(w))?;
        }
        if format != Format::Json {
            if rows.is_empty() {
                writeln!(out, "{}", search::CSV_HEADER)?;
            }
            writeln!(out, "{}", row.csv_row(Rounding::HalfDown))?;
            out.flush()?;
        }
        rows.push(row);
    }
    if format == Format::Json {
        let big = |x: &BigUint| json_number(x);
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "max": r.max_len,
                    "avg": r.average_decimal(4, Rounding::HalfDown),
                    "avg_num": big(&r.avg_num),
                    "avg_den": big(&r.avg_den),
                    "argmax": r.argmax_starts.iter().map(|w| search::render(w)).collect::<Vec<_>>(),
                    "budget_hits": r.budget_hits.iter().map(|w| search::render(w)).collect::<Vec<_>>(),
                })
            })
            .collect();
        write_json(out, &Value::Array(rows))?;
    }
    Ok(())
}
