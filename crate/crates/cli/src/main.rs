//! `inner-entropy`: boundary quantities of inner functions from JSON specs.
//!
//! Exit status: 0 on success, 1 when a verification suite or computation
//! fails, 2 on schema or input errors, 3 on precondition violations.

mod commands;
mod output;
mod schema;
mod verify;

use clap::{Parser, ValueEnum};
use inner_entropy_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

/// Subcommand selected by the first positional argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// f, D_h, Möbius distortion and G at the `points` listed in the input.
    Eval,
    /// CSV boundary profile of one quantity on the grid k/n.
    Profile,
    /// L^p norms of A(f) and log|f'| on the grid.
    Entropy,
    /// Runs the invariant suites; exits 1 on any failure.
    Verify,
    /// Good-lambda table for A(f) against log|f'|.
    Goodlambda,
    /// Beurling–Carleson classification of a boundary set.
    Bcset,
    /// Heavy-light decomposition of the singular measure.
    Decompose,
    /// Sublevel-set integral of the singular inner factor.
    Sublevel,
}

/// Quantity tabulated by `profile`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    /// Accumulated distortion along the radius.
    #[value(name = "A")]
    A,
    /// log|f'| from the closed form.
    #[value(name = "logfp")]
    LogFp,
    /// Distortion over the Stolz angle of aperture `--alpha`.
    #[value(name = "B_alpha")]
    BAlpha,
    /// Distortion inside the dyadic box of level `--level`.
    #[value(name = "A_Q")]
    AQ,
}

#[derive(Debug, Parser)]
#[command(
    name = "inner-entropy",
    version,
    about = "Boundary distortion and entropy of inner functions",
    allow_negative_numbers = true
)]
pub struct Cli {
    /// Command to run.
    #[arg(value_enum)]
    pub command: Command,
    /// JSON spec: a function for most commands, a boundary set for `bcset`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Exponent p.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Stolz aperture (> 1).
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Heavy threshold for `decompose`, level ratio M for `goodlambda`.
    #[arg(long = "M")]
    pub m: Option<f64>,
    /// Good-lambda target ratio.
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    /// Sublevel threshold in (0, 1).
    #[arg(long)]
    pub c: Option<f64>,
    /// Grid size.
    #[arg(long, default_value_t = 2048)]
    pub n: usize,
    /// Depth: generations for `bcset`, dyadic levels for `decompose`, shells for `sublevel`.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Cutoff of the hyperbolic radial variable.
    #[arg(long, default_value_t = 60.0)]
    pub tmax: f64,
    /// Quantity for `profile`.
    #[arg(long, value_enum, default_value = "A")]
    pub quantity: QuantityArg,
    /// Dyadic box level for the A_Q quantity.
    #[arg(long, default_value_t = 4)]
    pub level: u32,
    /// Comma-separated lambda levels for `goodlambda`.
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.2, 0.5, 1.0, 2.0])]
    pub lambdas: Vec<f64>,
    /// Comma-separated epsilon values for `goodlambda`.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.5, 1.0, 2.0, 5.0, 20.0])]
    pub epsilons: Vec<f64>,
}

/// Failure of one invocation, mapped onto the exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{0}")]
    Io(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) | CliError::Io(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Verification(_) => 1,
            CliError::Core(e) => match e {
                Error::InvalidSpec(_) | Error::Rule { .. } => 2,
                Error::OutsideDisk { .. }
                | Error::OffCircle { .. }
                | Error::Pole { .. }
                | Error::OutsideArc { .. }
                | Error::Precondition(_)
                | Error::Representation { .. } => 3,
                Error::Consistency { .. } | Error::Budget { .. } | Error::RefinementBudget { .. } => 1,
            },
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let threads = match std::env::var("INNER_ENTROPY_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            CliError::Schema(format!(
                "INNER_ENTROPY_THREADS must be a nonnegative integer, got {v:?}"
            ))
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let pool = thread_pool()?;
    let out = pool.install(|| commands::dispatch(cli))?;
    output::write(cli.output.as_deref(), &out.text)?;
    // A failed verification still writes its report before exiting 1.
    match out.failure {
        Some(msg) => Err(CliError::Verification(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("inner-entropy: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
