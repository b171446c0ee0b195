//! Command-line surface for the retrodictive engineering pipeline.
//!
//! Subcommands: `engineer` (coherent inputs for a target), `optimize`
//! (first-column weights maximizing the success metric), `verify` (plan
//! against the brute-force Fock oracle), `reproduce` (published reference
//! values as a regression table).
//!
//! Exit codes: 0 success, 2 validation failure, 3 optimizer not converged,
//! 4 oracle mismatch, 5 cutoff too small. Failures print a machine-readable
//! JSON envelope on standard error.

mod commands;
mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use schema::{ErrorBody, ErrorJson};

#[derive(Parser)]
#[command(name = "retrodict", version, about = "Coherent-input multiport plans for photon-number target states", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the coherent inputs that generate a target on a multiport.
    Engineer {
        /// Inline coefficients ("1, 1+0.5i, -2i") or a path to a target JSON
        /// file; unnormalized input is normalized on ingest.
        #[arg(long)]
        target: String,
        /// "dft" or a path to a matrix JSON file.
        #[arg(long, default_value = "dft")]
        unitary: String,
        /// Input arrangement: one coherent state per port, or a single one.
        #[arg(long, value_enum, default_value_t = ModeArg::Multi)]
        mode: ModeArg,
        /// Coherent phase in radians (single-input mode only).
        #[arg(long, default_value_t = 0.0)]
        phase: f64,
        /// Where to write the plan JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Maximize the success metric over the first-column weights.
    Optimize {
        /// Inline coefficients or a path to a target JSON file.
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Where to write the plan JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-derive a plan's state with the Fock-space oracle and compare.
    Verify {
        /// Plan JSON produced by `engineer` or `optimize`.
        #[arg(long)]
        plan: PathBuf,
        /// Total-photon cutoff; defaults to the automatic Poisson bound.
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Recompute the published reference values and report pass/fail.
    Reproduce {
        #[arg(long, value_enum, default_value_t = CaseArg::All)]
        case: CaseArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Multi,
    Single,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Lagrange,
    Grid,
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    #[value(name = "n1-dft")]
    N1Dft,
    #[value(name = "n1-opt")]
    N1Opt,
    #[value(name = "n2-dft")]
    N2Dft,
    #[value(name = "n2-opt")]
    N2Opt,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Table,
    Csv,
    Json,
}

/// Failure cases mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: bad flags, unreadable files, invalid targets or matrices.
    Validation(String),
    /// Exit 3: no optimizer produced a usable result.
    NotConverged(String),
    /// Exit 4: the oracle disagrees with the plan.
    OracleMismatch(String),
    /// Exit 5: the requested cutoff cannot represent the coherent inputs.
    CutoffTooSmall(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            Self::Validation(_) => "validation",
            Self::NotConverged(_) => "not-converged",
            Self::OracleMismatch(_) => "oracle-mismatch",
            Self::CutoffTooSmall(_) => "cutoff-too-small",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) => 2,
            Self::NotConverged(_) => 3,
            Self::OracleMismatch(_) => 4,
            Self::CutoffTooSmall(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Validation(m)
            | Self::NotConverged(m)
            | Self::OracleMismatch(m)
            | Self::CutoffTooSmall(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Engineer {
            target,
            unitary,
            mode,
            phase,
            out,
        } => commands::engineer::run(&target, &unitary, mode, phase, &out),
        Command::Optimize {
            target,
            method,
            out,
        } => commands::optimize::run(&target, method, &out),
        Command::Verify { plan, cutoff } => commands::verify::run(&plan, cutoff),
        Command::Reproduce { case, format } => commands::reproduce::run(case, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let envelope = ErrorJson {
                error: ErrorBody {
                    kind: err.kind().to_owned(),
                    message: err.message().to_owned(),
                },
            };
            eprintln!(
                "{}",
                serde_json::to_string(&envelope).expect("error envelope serializes")
            );
            ExitCode::from(err.exit_code())
        }
    }
}
