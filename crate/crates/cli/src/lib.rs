//! Command-line drivers: every subcommand validates its configuration, runs
//! the library, and writes a deterministic CSV or JSON report.

// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::fmt;

use clap::{Parser, Subcommand};

pub use output::SCHEMA_VERSION;

#[derive(Debug, Parser)]
#[command(
    name = "horospherical",
    version = concat!(env!("CARGO_PKG_VERSION"), " (schema 1)"),
    about = "Lattice-point counts and equidistribution experiments in horospherical coordinates",
    args_override_self = true
)]
pub struct Cli {
    /// key=value file; keys are long option names of the subcommand. Flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<String>,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iwasawa (NAK) coordinates of a matrix.
    Decompose(commands::decompose::Args),
    /// Shortest solutions of the gcd equation for primitive vectors.
    GcdScan(commands::gcd_scan::Args),
    /// Lattice points in Psi A_[-T,-S] Phi against the main term.
    Count(commands::count::Args),
    /// Integral points on the hyperboloid with height and N-coordinates.
    Lorentz(commands::lorentz::Args),
    /// Iwasawa-coordinate displacement constants under eps-perturbations.
    Perturb(commands::perturb::Args),
    /// Shell statistics of a column of an earlier CSV report.
    Stats(commands::stats::Args),
}

/// Failure of a run, carrying its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad arguments or configuration (exit 2).
    Config(String),
    /// Input violating a mathematical invariant (exit 3).
    Invariant(String),
    /// File-system or stream failure (exit 4).
    Io(String),
    /// Any other failure of the computation (exit 1).
    Compute(String),
    /// The reader closed the output stream; not an error (exit 0).
    Closed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) => 1,
            CliError::Config(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Io(_) => 4,
            CliError::Closed => 0,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violation: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Compute(m) => write!(f, "{m}"),
            CliError::Closed => write!(f, "output closed"),
        }
    }
}

impl From<horospherical::Error> for CliError {
    fn from(e: horospherical::Error) -> Self {
        use horospherical::Error as E;
        let m = e.to_string();
        match e {
            E::InvariantViolation(_) | E::DegenerateDecomposition(_) | E::NotPrimitive(_) | E::HeightUndefined(_) => {
                CliError::Invariant(m)
            }
            E::DimensionMismatch { .. }
            | E::InvalidInterval { .. }
            | E::UnsupportedRing(_)
            | E::UnsupportedDimension(_)
            | E::ConfigMismatch(_)
            | E::InvalidInput(_) => CliError::Config(m),
            E::EmptySample | E::DegenerateFit(_) | E::QuadratureFailure { .. } | E::Overflow => CliError::Compute(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::Closed;
        }
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if let csv::ErrorKind::Io(io) = e.kind() {
            if io.kind() == std::io::ErrorKind::BrokenPipe {
                return CliError::Closed;
            }
            CliError::Io(e.to_string())
        } else if e.is_io_error() {
            CliError::Io(e.to_string())
        } else {
            CliError::Config(format!("malformed CSV: {e}"))
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), merges any config file, and
/// runs the subcommand. Help and version requests print and return `Ok`.
pub fn run<I, T>(args: I) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let raw: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let merged = config::merge_config(raw)?;
    let cli = match Cli::try_parse_from(merged) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(CliError::Config(e.to_string()));
        }
    };
    let threads = cli.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Decompose(a) => commands::decompose::run(a),
        Command::GcdScan(a) => commands::gcd_scan::run(a),
        Command::Count(a) => commands::count::run(a),
        Command::Lorentz(a) => commands::lorentz::run(a),
        Command::Perturb(a) => commands::perturb::run(a),
        Command::Stats(a) => commands::stats::run(a),
    })
}
