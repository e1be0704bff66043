//! `triq-lab` — command-line front end for the three-qubit entanglement
//! toolkit: state sampling, canonical decomposition, invariants, class
//! labels, entropy/overlap optimization, polytope geometry, and seeded
//! ensemble runs that regenerate the reference datasets.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on validation or
//! runtime failures.

mod io;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use triq_lab::classes::ClassId;

#[derive(Debug, Parser)]
#[command(
    name = "triq-lab",
    version,
    about = "Three-qubit entanglement laboratory"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Args)]
struct SeedArg {
    /// RNG seed; falls back to $TRIQ_LAB_SEED, then to a generated value
    /// that is echoed so the run can be replayed.
    #[arg(long)]
    pub(crate) seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
struct WorkerArg {
    /// Worker threads. Results are bit-identical for every worker count.
    #[arg(long, default_value_t = 1)]
    pub(crate) workers: usize,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Draw Haar-random states and write them as JSON or CSV.
    Sample {
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[command(flatten)]
        seed: SeedArg,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
        format: String,
    },
    /// Reduce a state to its five-term canonical form.
    Decompose {
        /// State file (JSON or CSV); "-" reads stdin.
        state: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate every polynomial invariant of a state.
    Invariants {
        state: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entanglement class and SLOCC label of a state.
    Classify {
        state: String,
        /// Absolute tolerance per scalar class condition.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimal Rényi decomposition entropy over local unitaries.
    Riu {
        state: String,
        /// Rényi order; accepts numbers and "inf".
        #[arg(long, default_value = "1", value_parser = parse_q)]
        q: f64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximal fidelity with an entanglement class.
    Overlap {
        state: String,
        #[arg(long, value_parser = clap::value_parser!(ClassId))]
        class: ClassId,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map an ensemble into the entanglement polytope.
    Polytope {
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        /// Grid resolution per axis.
        #[arg(long, default_value_t = 80)]
        res: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        workers: WorkerArg,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Also write one CSV row per state.
        #[arg(long)]
        per_state: bool,
    },
    /// Ensemble statistics: histograms, moments, and beta-like fits.
    Ensemble {
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        #[arg(long, default_value_t = 200)]
        bins: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        workers: WorkerArg,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate a reference dataset with documented defaults.
    Reproduce {
        /// One of fig1, fig2, fig3, fig6, table1, table-moments.
        target: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = 200)]
        bins: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        workers: WorkerArg,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_q(s: &str) -> Result<f64, String> {
    match s.to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "oo" => Ok(f64::INFINITY),
        other => {
            let q: f64 = other.parse().map_err(|e| format!("{e}"))?;
            if q < 0.0 || q.is_nan() {
                Err(format!("Rényi order must be ≥ 0, got {q}"))
            } else {
                Ok(q)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run::dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(run::CliError::Usage(msg)) => {
            eprintln!("triq-lab: {msg}");
            ExitCode::from(1)
        }
        Err(run::CliError::Failure(err)) => {
            eprintln!("triq-lab: {err:#}");
            ExitCode::from(2)
        }
    }
}
