//! Command-line driver for the Gaussian measurement toolkit.
//!
//! Every subcommand loads a JSON problem file (`--input`), validates it,
//! runs its tasks in order, and writes a deterministic JSON report (sorted
//! keys, fixed float formatting) to stdout or `--output`. The subcommand
//! states what kind of work the file must contain; `validate` is special
//! and only checks and summarizes the entities.
//!
//! Exit codes: 0 on success, 2 when the problem file cannot be read or
//! parsed, 3 when it fails validation (version, references, entity
//! invariants, subcommand/task mismatch), 4 when a task fails at runtime —
//! in which case the partial report is still written.

use std::fs;
use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand};

use gausstomo::problem::{load_problem, run_problem, RunConfig};
use gausstomo::report::render_json;
use gausstomo::{DEFAULT_CUTOFF, DEFAULT_TOL};

#[derive(Debug, Parser)]
#[command(
    name = "gausstomo",
    version,
    about = "Calculus of Gaussian quantum measurements: validity, classification, \
             informational completeness, dilations, statistics, reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Problem file (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Report destination; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Seed for stochastic tasks (sampling).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Tolerance for validity checks, ranks, and decompositions.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Fock-space truncation for oracle-backed tasks.
    #[arg(long, global = true, default_value_t = DEFAULT_CUTOFF)]
    cutoff: usize,
}

/// One subcommand per op group; the library's op table defines which task
/// ops each group accepts.
#[derive(Debug, Subcommand)]
enum Command {
    /// Validate and summarize the entities without running tasks.
    Validate,
    /// Classify observables (commutative / sharp / covariant / complete);
    /// also smearing, postprocessing, and marginal-direction tasks.
    Classify,
    /// Test one observable for informational completeness.
    IcSingle,
    /// Decide informational completeness of an observable set.
    IcSet,
    /// Covering radius of a direction sample.
    Coverage,
    /// Search for two states the set cannot tell apart.
    Witness,
    /// Build a measurement channel from a dilation specification.
    Dilate,
    /// Convert an observable to its measurement channel.
    ChannelFromObs,
    /// Extract the observable a channel measures.
    ObsFromChannel,
    /// Outcome statistics of an observable on a state; also channel
    /// application and composition tasks.
    Pushforward,
    /// Draw outcomes and accumulate empirical moments.
    Sample,
    /// Least-squares Gaussian state reconstruction from statistics.
    Reconstruct,
    /// Factor a covariant observable into symplectic, noise, and
    /// postprocessing parts.
    DecomposeCovariant,
    /// Probe the support of a bosonic observable's generating function.
    BosonicProbe,
    /// Compare analytic values against the truncated-Fock oracle.
    OracleCheck,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Classify => "classify",
            Command::IcSingle => "ic-single",
            Command::IcSet => "ic-set",
            Command::Coverage => "coverage",
            Command::Witness => "witness",
            Command::Dilate => "dilate",
            Command::ChannelFromObs => "channel-from-obs",
            Command::ObsFromChannel => "obs-from-channel",
            Command::Pushforward => "pushforward",
            Command::Sample => "sample",
            Command::Reconstruct => "reconstruct",
            Command::DecomposeCovariant => "decompose-covariant",
            Command::BosonicProbe => "bosonic-probe",
            Command::OracleCheck => "oracle-check",
        }
    }
}

fn write_report(output: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("failed to write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();

    let Some(input) = cli.input.as_ref() else {
        eprintln!("error: --input <PATH> is required");
        process::exit(2);
    };
    let text = match fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: failed to read {}: {e}", input.display());
            process::exit(2);
        }
    };
    let file = match load_problem(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {}", e.message);
            process::exit(e.exit_code());
        }
    };

    let config = RunConfig {
        seed: cli.seed,
        tol: cli.tol,
        cutoff: cli.cutoff,
    };
    match run_problem(&file, &config, Some(cli.command.name())) {
        Ok(report) => {
            if let Err(msg) = write_report(cli.output.as_ref(), &render_json(&report)) {
                eprintln!("error: {msg}");
                process::exit(2);
            }
        }
        Err(e) => {
            if let Some(partial) = &e.partial_report {
                if let Err(msg) = write_report(cli.output.as_ref(), &render_json(partial)) {
                    eprintln!("error: {msg}");
                }
            }
            eprintln!("error: {}", e.message);
            process::exit(e.exit_code());
        }
    }
}
