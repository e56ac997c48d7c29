//! Command-line front end: input files, the `analyze`, `validate` and `scan`
//! commands, and JSON/TSV reports.
//!
//! Exit codes: 0 success, 2 a hypothesis of the method fails, 3 the
//! degenerate Gamma case, 4 bad input or configuration.

pub mod commands;
pub mod input;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use conediag::series::Backend;
use thiserror::Error;

pub use commands::{cmd_analyze, cmd_scan, cmd_validate, default_orders, default_scan_depth, run};
pub use report::AnalysisReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Analyze,
    Validate,
    Scan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Validate => "validate",
            Command::Scan => "scan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

/// Everything a job needs; two equal configs give identical reports up to
/// the timings block.
#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub command: Command,
    pub input: PathBuf,
    /// Overrides the `beta` of the input file.
    pub beta: Option<String>,
    pub scan_depth: Option<usize>,
    pub orders: Option<Vec<u64>>,
    pub backend: Backend,
    pub samples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl JobConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        JobConfig {
            command,
            input: input.into(),
            beta: None,
            scan_depth: None,
            orders: None,
            backend: Backend::Exact,
            samples: 4096,
            seed: 42,
            out: None,
            format: Format::Json,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "conediag", version, about = "Diagonal asymptotics of P^(-beta) at quadratic cone points")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Locate the cone point, check the hypotheses and estimate the diagonal.
    Analyze(JobArgs),
    /// Analyze, then compare the estimate with exact diagonal coefficients.
    Validate(JobArgs),
    /// Report the first nonpositive diagonal coefficient up to the scan depth.
    Scan(JobArgs),
}

#[derive(Debug, clap::Args)]
struct JobArgs {
    /// JSON input file.
    #[arg(long)]
    input: PathBuf,
    /// Exponent beta, e.g. `1`, `7/3` or `0.4`; overrides the input file.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long)]
    scan_depth: Option<usize>,
    /// Comma-separated validation orders.
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendArg,
    /// Samples for the minimality falsifier.
    #[arg(long, default_value_t = 4096)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

pub fn parse_args<I, T>(args: I) -> Result<JobConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let (command, a) = match cli.command {
        Sub::Analyze(a) => (Command::Analyze, a),
        Sub::Validate(a) => (Command::Validate, a),
        Sub::Scan(a) => (Command::Scan, a),
    };
    Ok(JobConfig {
        command,
        input: a.input,
        beta: a.beta,
        scan_depth: a.scan_depth,
        orders: a.orders,
        backend: match a.backend {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
        },
        samples: a.samples,
        seed: a.seed,
        out: a.out,
        format: a.format,
    })
}

/// Parses arguments, runs the job, writes the report and returns the exit
/// code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_args(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("conediag: {e}");
            return EXIT_INPUT;
        }
    };
    let text = match cfg.format {
        Format::Json => report.to_json() + "\n",
        Format::Tsv => report.to_tsv(),
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("conediag: {e}");
        return EXIT_INPUT;
    }
    report.exit_code
}
