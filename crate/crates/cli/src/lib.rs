//! The `choquet` command line.
//!
//! Exit codes: `0` success, `1` a theorem-level invariant failed (a JSON
//! witness goes to stdout), `2` usage, validation or input errors.

mod commands;
mod render;
pub mod suite;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use choquet_core::capacity::Axiom;
use choquet_core::integral::DEFAULT_PAIR_BUDGET;
use choquet_core::number::{parse_rational, Rational};
use serde_json::Value;

pub use suite::SuiteConfig;

/// Environment variable overriding enumeration budgets.
pub const BUDGET_VAR: &str = "CHOQUET_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "choquet", version, about = "Exact Choquet integrals, capacities and their theorems")]
pub struct Cli {
    /// Output format. Defaults to JSON, except `integrate` which prints the bare value.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Choquet integral of a function against a capacity.
    Integrate(IntegrateArgs),
    /// Axiom checks and capacity transformations.
    #[command(subcommand)]
    Capacity(CapacityCommand),
    /// Turn a family of sets into a nested chain with the same indicator sum.
    Nest(NestArgs),
    /// Dual value over dominated additive measures.
    Dual(DualArgs),
    /// Dyadic Hausdorff content of a set of grid cells.
    Hausdorff(HausdorffArgs),
    /// Convergence audits of a finite prefix of a sequence.
    Converge(ConvergeArgs),
    /// Run every property check on a seeded corpus.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long)]
    pub capacity: PathBuf,
    #[arg(long)]
    pub function: PathBuf,
    /// Include the layer-cake terms.
    #[arg(long)]
    pub breakdown: bool,
}

#[derive(Debug, Subcommand)]
pub enum CapacityCommand {
    /// Check axioms; all of them unless `--axiom` is given.
    Check {
        #[arg(long)]
        capacity: PathBuf,
        #[arg(long, value_parser = parse_axiom)]
        axiom: Vec<Axiom>,
    },
    /// `A ↦ H(A ∩ S)`.
    Contract {
        #[arg(long)]
        capacity: PathBuf,
        /// Comma-separated point indices of `S`.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        set: Vec<usize>,
    },
    /// Semifinite regularization.
    Regularize {
        #[arg(long)]
        capacity: PathBuf,
    },
    /// A seeded random or structured capacity.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Size threshold for the threshold kinds.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Points whose singletons (and every superset) get capacity ∞.
        #[arg(long, value_delimiter = ',')]
        infinite: Vec<usize>,
    },
    /// Sublinearity on the grid `{0, 1/k, …, m}` against strong subadditivity.
    Sublinear {
        #[arg(long)]
        capacity: PathBuf,
        #[arg(long, default_value_t = 3)]
        m: u64,
        #[arg(long, default_value_t = 2)]
        k: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    RandomMonotone,
    RandomSubmodular,
    RandomSubadditive,
    Additive,
    Threshold,
    BoundedThreshold,
}

#[derive(Debug, Args)]
pub struct NestArgs {
    #[arg(long)]
    pub sets: PathBuf,
    #[arg(long)]
    pub capacity: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Greedy,
    Lp,
    Both,
}

#[derive(Debug, Args)]
pub struct DualArgs {
    #[arg(long)]
    pub capacity: PathBuf,
    #[arg(long)]
    pub function: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Lp)]
    pub method: Method,
    /// Semifinite targets `M`; runs the unboundedness construction.
    #[arg(long, value_delimiter = ',', value_parser = parse_rational_arg)]
    pub targets: Vec<Rational>,
}

#[derive(Debug, Args)]
pub struct HausdorffArgs {
    #[arg(long)]
    pub dim: u32,
    #[arg(long)]
    pub depth: u32,
    #[arg(long, value_parser = parse_rational_arg)]
    pub beta: Rational,
    #[arg(long)]
    pub cells: PathBuf,
    /// Write the content of every cell subset as a capacity.
    #[arg(long)]
    pub export: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Qu,
    Fatou,
    Dct,
    Converse,
    Countable,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub capacity: PathBuf,
    #[arg(long)]
    pub sequence: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Uniform tolerance η.
    #[arg(long, value_parser = parse_rational_arg, default_value = "1/10")]
    pub eta: Rational,
    /// Exceptional budget ε; defaults to the smallest scheduled one, else 0.
    #[arg(long, value_parser = parse_rational_arg)]
    pub eps: Option<Rational>,
    /// First index of the audited tail.
    #[arg(long, default_value_t = 0)]
    pub tail: usize,
    /// Truncation level k.
    #[arg(long, value_parser = parse_rational_arg)]
    pub k: Option<Rational>,
    /// Dominating function F for `dct`; defaults to the envelope of the prefix.
    #[arg(long)]
    pub dominator: Option<PathBuf>,
    /// When the capacity fails the hypotheses, search for a counterexample instead.
    #[arg(long)]
    pub search: bool,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Largest ground set in the random corpus.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Random draws per property.
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub m: u64,
    #[arg(long, default_value_t = 2)]
    pub k: u64,
}

fn parse_axiom(s: &str) -> Result<Axiom, String> {
    s.parse::<Axiom>().map_err(|e| e.to_string())
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// The result of one command before formatting.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub value: Value,
    /// Preferred rendering when no `--format` is given.
    pub plain: Option<String>,
    /// A theorem-level invariant failed; `value` carries the witness.
    pub violated: bool,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, plain: None, violated: false }
    }

    fn checked(value: Value, violated: bool) -> Self {
        Report { value, plain: None, violated }
    }
}

/// A usage or input error, reported with exit code 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError(pub String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<choquet_core::Error> for CliError {
    fn from(e: choquet_core::Error) -> Self {
        CliError(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError(format!("{}: malformed JSON at line {} column {}: {e}", path.display(), e.line(), e.column())))
}

/// Prefixes a loader error with the file it came from.
pub(crate) fn in_file<T>(path: &Path, result: choquet_core::Result<T>) -> CliResult<T> {
    result.map_err(|e| CliError(format!("{}: {e}", path.display())))
}

/// Pair budget from [`BUDGET_VAR`], else the library default.
pub fn budget() -> CliResult<u128> {
    match std::env::var(BUDGET_VAR) {
        Ok(s) => s.trim().parse().map_err(|_| CliError(format!("{BUDGET_VAR}={s:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_PAIR_BUDGET),
    }
}

pub fn execute(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Integrate(a) => commands::integrate(a),
        Command::Capacity(c) => commands::capacity(c),
        Command::Nest(a) => commands::nest(a),
        Command::Dual(a) => commands::dual(a),
        Command::Hausdorff(a) => commands::hausdorff(a),
        Command::Converge(a) => commands::converge(a),
        Command::Suite(a) => suite::command(a),
    }
}

/// Renders a report; violations always come out as JSON.
pub fn render(report: &Report, format: Option<Format>) -> String {
    let json = || serde_json::to_string_pretty(&report.value).expect("JSON values serialize");
    if report.violated {
        return json();
    }
    match (format, &report.plain) {
        (Some(Format::Table), _) => render::table(&report.value),
        (None, Some(plain)) => plain.clone(),
        _ => json(),
    }
}

/// Parses `args` (program name first), runs the command and prints the result.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            println!("{}", render(&report, cli.format));
            i32::from(report.violated)
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn violations_render_as_json_whatever_the_format() {
        let report = Report { value: json!({ "witness": [1, 2] }), plain: Some("x".into()), violated: true };
        for format in [None, Some(Format::Table), Some(Format::Json)] {
            let out: Value = serde_json::from_str(&render(&report, format)).unwrap();
            assert_eq!(out["witness"], json!([1, 2]));
        }
    }

    #[test]
    fn plain_rendering_is_the_default_only() {
        let report = Report { value: json!({ "value": "9/2" }), plain: Some("9/2".into()), violated: false };
        assert_eq!(render(&report, None), "9/2");
        assert_eq!(render(&report, Some(Format::Table)), "value = 9/2");
        assert!(render(&report, Some(Format::Json)).contains("\"value\": \"9/2\""));
    }

    #[test]
    fn table_rendering_flattens_nested_values() {
        let text = render::table(&json!({ "a": { "b": [1, 2] }, "c": [{ "d": "x" }] }));
        assert_eq!(text, "a.b = [1,2]\nc[0].d = x");
    }
}
