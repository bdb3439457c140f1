//! `axcat`: check litmus programs against axiomatic memory models.
//!
//! Exit codes: 0 when the `exists` outcome is forbidden, 1 when it is
//! allowed, 2 on any error. JSON goes to stdout, diagnostics to stderr.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "axcat", version, about = "Axiomatic weak-memory litmus checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AxiomChoice {
    /// Full sequential consistency.
    Sc,
    /// SC per location only.
    Scpl,
    /// SC per location plus No Thin Air, Observation and Propagation.
    Framework,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the test's `exists` outcome is allowed.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        axioms: AxiomChoice,
        /// Architecture used by `--axioms framework`.
        #[arg(long, default_value = "sc-arch")]
        arch: String,
        #[arg(long)]
        json: bool,
    },
    /// Classify every candidate execution under each axiom set.
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value = "sc-arch")]
        arch: String,
        #[arg(long)]
        json: bool,
        /// Include every candidate execution graph in the JSON report.
        #[arg(long)]
        dump_executions: bool,
    },
    /// Show why an outcome is forbidden: shortest SC cycle, collapse
    /// witness pair and coherence patterns.
    Explain {
        file: PathBuf,
        /// Outcome binding, e.g. `P0:r0=0 /\ P1:r1=0`.
        #[arg(long)]
        outcome: String,
        #[arg(long, value_enum, default_value = "framework")]
        axioms: AxiomChoice,
        #[arg(long, default_value = "sc-arch")]
        arch: String,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check {
            file,
            axioms,
            arch,
            json,
        } => commands::check(&file, axioms, &arch, json),
        Command::Enumerate {
            file,
            arch,
            json,
            dump_executions,
        } => commands::enumerate(&file, &arch, json, dump_executions),
        Command::Explain {
            file,
            outcome,
            axioms,
            arch,
            json,
        } => commands::explain(&file, &outcome, axioms, &arch, json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("axcat: {e}");
            ExitCode::from(2)
        }
    }
}
