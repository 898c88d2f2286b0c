//! `mtqc`: model verification, forced-measurement statistics and
//! measurement-generated braid checks.
//!
//! Exit codes: 0 pass, 1 a check failed, 2 usage or parse error.

mod args;
mod braid;
mod output;
mod schedule;
mod teleport;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::args::UsageError;

#[derive(Parser)]
#[command(name = "mtqc", version, about = "Measurement-only braiding of anyons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check pentagon, hexagon, unitarity and dimension identities.
    Verify(verify::VerifyArgs),
    /// Monte Carlo statistics of forced-measurement teleportation.
    TeleportStats(teleport::TeleportArgs),
    /// Compare measurement-generated braids with direct exchanges.
    BraidCheck(braid::BraidCheckArgs),
    /// Emit the measurement schedule of a braid word.
    Compile(schedule::CompileArgs),
    /// Execute a schedule file.
    Run(schedule::ScheduleRunArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Verify(a) => verify::run(&a),
        Command::TeleportStats(a) => teleport::run(&a),
        Command::BraidCheck(a) => braid::run(&a),
        Command::Compile(a) => schedule::compile(&a),
        Command::Run(a) => schedule::run(&a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<UsageError>() { 2 } else { 1 })
        }
    }
}
