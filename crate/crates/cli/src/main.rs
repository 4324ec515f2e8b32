//! `lossinfo`: compute loss-dependent uncertainty quantities from scenario
//! files, verify identities, sweep partition lattices and print entropy
//! witnesses.
//!
//! Exit status: 0 on success, 1 when a verify suite fails, 2 on invalid
//! input, 3 when the engine cannot produce a value.

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod compute;
mod error;
mod lattice;
mod loss_spec;
mod report;
mod scenario;
mod verify;
mod witness;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lossinfo::continuous::WitnessFamily;

use crate::error::{CliError, CliResult};
use crate::loss_spec::LossSpec;
use crate::report::{emit, sha256_hex, to_json};
use crate::scenario::Scenario;
use crate::verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "lossinfo", version = lossinfo::VERSION, about = "Loss-dependent entropy and information")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the report (the CSV for `lattice`) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Answer every query of a scenario.
    Compute {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Run an identity suite against every query of a scenario.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        /// prop1, telescope, pythagoras, bridge or belief.
        #[arg(long)]
        suite: Suite,
        /// Seed for the random belief of the belief suite.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Optimal risk over every partition of a random space, as CSV.
    Lattice {
        #[arg(long)]
        atoms: usize,
        /// log, square, tsallis:GAMMA or bregman:sqnorm|negentropy|expsum.
        #[arg(long, default_value = "square")]
        loss: LossSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Risk bounds along a witness ladder. Both families when none is given.
    Witness {
        /// gaussian_logloss or shifted_gaussian_hyvarinen.
        #[arg(long)]
        family: Option<String>,
        /// Ascending witness indices, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = witness::DEFAULT_LADDER)]
        n: Vec<f64>,
    },
}

fn read_scenario(path: &Path) -> CliResult<(Scenario, String)> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::schema(format!("--scenario {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::schema(format!("--scenario {}: {e}", path.display())))?;
    Ok((Scenario::from_json(text)?, sha256_hex(&bytes)))
}

/// Runs the command; `Ok(false)` means a verify suite reported failures.
fn run(cli: Cli) -> CliResult<bool> {
    let out = cli.out.as_deref();
    let json = cli.format == Format::Json;
    match cli.command {
        Command::Compute { scenario } => {
            let (scenario, digest) = read_scenario(&scenario)?;
            let report = compute::run(&scenario, digest)?;
            let text = if json {
                to_json(&report)
            } else {
                compute::render_table(&report)
            };
            emit(&text, out)?;
            Ok(true)
        }
        Command::Verify {
            scenario,
            suite,
            seed,
        } => {
            let (scenario, digest) = read_scenario(&scenario)?;
            let report = verify::run(&scenario, suite, seed, digest)?;
            let text = if json {
                to_json(&report)
            } else {
                verify::render_table(&report)
            };
            emit(&text, out)?;
            Ok(report.passed)
        }
        Command::Lattice { atoms, loss, seed } => {
            let (report, csv) = lattice::run(atoms, loss, seed)?;
            let summary = if json {
                to_json(&report)
            } else {
                format!(
                    "{} partitions, {} refinement pairs, monotone: {}\n",
                    report.partition_count, report.refinement_pairs, report.monotone
                )
            };
            emit(&csv, out)?;
            if out.is_some() {
                emit(&summary, None)?;
            } else {
                eprint!("{summary}");
            }
            Ok(true)
        }
        Command::Witness { family, n } => {
            let families = match family {
                Some(f) => vec![witness::parse_family(&f)?],
                None => WitnessFamily::ALL.to_vec(),
            };
            let report = witness::run(&families, &n)?;
            let text = if json {
                to_json(&report)
            } else {
                witness::render_table(&report)
            };
            emit(&text, out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("lossinfo: {e}");
            e.exit_code()
        }
    }
}
