//! `stablepi1`: list, run and verify the scenario catalogue, or print the
//! Smith normal form of a matrix read from standard input.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! input errors.

use std::io::{ErrorKind, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use stablepi1::intlin::{cokernel_invariants, smith_normal_form, IntMatrix};
use stablepi1::scenarios::{
    self, parse, read_sources, verify_sources, CatalogueReport, Execution, Report, RunOptions, Scenario, Source,
};
use stablepi1::torus::DEFAULT_GROUP_CAP;

#[derive(Parser, Debug)]
#[command(name = "stablepi1", version, about = "Fundamental groups of stable Godeaux surface configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Md, global = true)]
    format: Format,

    /// Coset limit for Todd–Coxeter enumeration.
    #[arg(
        long,
        env = "STABLEPI1_MAX_COSETS",
        default_value_t = 1_000_000,
        value_parser = clap::value_parser!(u64).range(1..),
        global = true
    )]
    max_cosets: u64,

    /// Directory of `.scn` files to use instead of the bundled catalogue.
    #[arg(long, global = true)]
    catalogue_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List scenario ids with their expected groups.
    List,
    /// Run one scenario.
    Run {
        /// Scenario id, for example P1 or E3red.
        id: String,
    },
    /// Run every scenario and summarise.
    VerifyAll {
        /// Run scenarios one after another.
        #[arg(long)]
        sequential: bool,
    },
    /// Smith normal form of a whitespace-separated integer matrix on stdin.
    Snf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

/// Writes to stdout, exiting quietly once the reader has gone away.
fn emit(text: &str) {
    if let Err(e) = std::io::stdout().lock().write_all(text.as_bytes()) {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("failed writing to stdout: {e}");
    }
}

macro_rules! out {
    ($($arg:tt)*) => { emit(&format!($($arg)*)) };
}

macro_rules! outln {
    ($($arg:tt)*) => { emit(&format!("{}\n", format_args!($($arg)*))) };
}

/// A failure that maps to exit code 2.
struct UsageError(String);

fn sources(cli: &Cli) -> Result<Vec<Source>, UsageError> {
    match &cli.catalogue_dir {
        Some(dir) => read_sources(dir).map_err(|e| UsageError(e.to_string())),
        None => Ok(scenarios::bundled_sources()),
    }
}

fn options(cli: &Cli) -> RunOptions {
    RunOptions { max_cosets: usize::try_from(cli.max_cosets).unwrap_or(usize::MAX), group_cap: DEFAULT_GROUP_CAP }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn computed(r: &Report) -> String {
    match (r.order, r.cyclic) {
        (Some(1), _) => "1".into(),
        (Some(n), true) => format!("Z/{n}"),
        (Some(n), false) => format!("order {n}"),
        (None, _) => "error".into(),
    }
}

fn markdown(reports: &[Report]) -> String {
    let mut out = String::from(
        "| id | computed \\|π₁\\| | expected \\|π₁\\| | normal | smoothable | family | verdict |\n\
         |----|----|----|----|----|----|----|\n",
    );
    for r in reports {
        let expected = r.expected.map_or("?".to_string(), |e| e.to_string());
        let normal = match r.normal {
            Some(true) => "yes",
            Some(false) => "no",
            None => "?",
        };
        let verdict = if r.passed() { "pass" } else { "FAIL" };
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            r.scenario,
            computed(r),
            expected,
            normal,
            r.smoothable.as_deref().unwrap_or("?"),
            r.family.as_deref().unwrap_or("?"),
            verdict
        ));
    }
    out
}

fn report_errors(reports: &[Report]) {
    for r in reports.iter().filter(|r| !r.passed()) {
        match &r.error {
            Some(e) => eprintln!("{}: {e}", r.scenario),
            None => eprintln!("{}: computed {} differs from the expected group", r.scenario, computed(r)),
        }
    }
}

#[derive(Serialize)]
struct ListEntry<'a> {
    scenario: &'a str,
    kind: String,
    family: &'a str,
    expected: String,
}

fn list(cli: &Cli) -> Result<ExitCode, UsageError> {
    let mut parsed: Vec<Scenario> = Vec::new();
    for src in sources(cli)? {
        match parse(&src.text) {
            Ok(s) => parsed.push(s),
            Err(e) => eprintln!("{}: {e}", src.name),
        }
    }
    parsed.sort_by(|a, b| a.id.cmp(&b.id));
    let entries: Vec<ListEntry> = parsed
        .iter()
        .map(|s| ListEntry {
            scenario: &s.id,
            kind: s.kind.to_string(),
            family: &s.meta.family,
            expected: s.expected.to_string(),
        })
        .collect();
    match cli.format {
        Format::Json => outln!("{}", json(&entries)),
        Format::Md => {
            outln!("| id | expected \\|π₁\\| | kind | family |\n|----|----|----|----|");
            for e in &entries {
                outln!("| {} | {} | {} | {} |", e.scenario, e.expected, e.kind, e.family);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli, id: &str) -> Result<ExitCode, UsageError> {
    let scenario = sources(cli)?
        .iter()
        .filter_map(|src| parse(&src.text).ok())
        .find(|s| s.id == id)
        .ok_or_else(|| UsageError(format!("unknown scenario {id:?}")))?;
    let report = scenarios::run_scenario(&scenario, &options(cli));
    match cli.format {
        Format::Json => outln!("{}", json(&report)),
        Format::Md => out!("{}", markdown(std::slice::from_ref(&report))),
    }
    report_errors(std::slice::from_ref(&report));
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verify_all(cli: &Cli, sequential: bool) -> Result<ExitCode, UsageError> {
    let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
    let catalogue: CatalogueReport = verify_sources(&sources(cli)?, exec, &options(cli));
    match cli.format {
        Format::Json => outln!("{}", json(&catalogue)),
        Format::Md => {
            out!("{}", markdown(&catalogue.reports));
            outln!("\n{}/{} passed", catalogue.summary.passed, catalogue.summary.total);
        }
    }
    report_errors(&catalogue.reports);
    Ok(if catalogue.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct SnfOutput {
    rows: usize,
    cols: usize,
    diagonal: Vec<String>,
    cokernel: String,
}

fn read_matrix(text: &str) -> Result<IntMatrix, UsageError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| UsageError(format!("line {}: {t:?} is not an integer", i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() {
        return Err(UsageError("no matrix on standard input".into()));
    }
    if rows.iter().any(|r| r.len() != cols) {
        return Err(UsageError("rows have different lengths".into()));
    }
    Ok(IntMatrix::from_rows(&rows))
}

fn snf(cli: &Cli) -> Result<ExitCode, UsageError> {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text).map_err(|e| UsageError(e.to_string()))?;
    let a = read_matrix(&text)?;
    let d = smith_normal_form(&a);
    let out = SnfOutput {
        rows: a.rows(),
        cols: a.cols(),
        diagonal: d.diagonal().iter().map(ToString::to_string).collect(),
        cokernel: cokernel_invariants(&a.transpose(), a.rows()).to_string(),
    };
    match cli.format {
        Format::Json => outln!("{}", json(&out)),
        Format::Md => {
            out!("{}", d.d);
            outln!("cokernel: {}", out.cokernel);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::List => list(&cli),
        Command::Run { id } => run(&cli, id),
        Command::VerifyAll { sequential } => verify_all(&cli, *sequential),
        Command::Snf => snf(&cli),
    };
    result.unwrap_or_else(|UsageError(msg)| {
        eprintln!("error: {msg}");
        ExitCode::from(2)
    })
}
