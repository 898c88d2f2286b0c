use anyhow::Result;
use clap::Args;
use mtqc_core::stats::{summarize, TeleportSetup, TeleportSummary};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{AnyonArgs, Format, RunArgs};
use crate::output::{print_csv, print_json, write_trace};

#[derive(Args, Debug)]
pub struct TeleportArgs {
    #[command(flatten)]
    pub anyon: AnyonArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Allowed deviation, in standard errors, from the closed-form values.
    #[arg(long, default_value_t = 3.0)]
    pub sigmas: f64,
}

/// One trial as printed: the outcome string `e1 f1 ... fn`.
#[derive(Serialize)]
struct TrialRow {
    trial: u64,
    attempts: usize,
    exceeded: bool,
    outcomes: String,
}

#[derive(Serialize)]
struct Checks {
    channels: bool,
    mean_attempts: bool,
    tails: bool,
}

#[derive(Serialize)]
struct Report<'a> {
    model: &'a str,
    charge: &'a str,
    routing: String,
    seed: u64,
    max_attempts: usize,
    sigmas: f64,
    summary: TeleportSummary,
    checks: Checks,
    pass: bool,
    trials: Vec<TrialRow>,
}

pub fn run(args: &TeleportArgs) -> Result<bool> {
    let (model, charge) = args.anyon.load()?;
    let setup = TeleportSetup { model: model.clone(), charge, routing: args.anyon.routing, max_attempts: args.run.max_attempts };
    let seed = args.run.seed;
    let trials = (0..args.run.trials)
        .into_par_iter()
        .map(|t| setup.run_trial(seed, t))
        .collect::<mtqc_core::Result<Vec<_>>>()?;
    if let Some(path) = &args.run.log {
        write_trace(path, trials.iter().flat_map(|t| &t.events))?;
    }
    let summary = summarize(&model, charge, &trials)?;
    let k = args.sigmas;
    let checks = Checks {
        channels: summary.channels.iter().all(|c| c.z.abs() <= k),
        mean_attempts: summary.mean_attempts <= summary.attempt_bound + k * summary.mean_sigma,
        tails: summary.tails.iter().all(|t| t.empirical <= t.bound + k * t.sigma),
    };
    let pass = checks.channels && checks.mean_attempts && checks.tails;
    let rows: Vec<TrialRow> = trials
        .iter()
        .map(|t| TrialRow { trial: t.trial, attempts: t.attempts, exceeded: t.exceeded, outcomes: t.outcomes.join(" ") })
        .collect();
    match args.run.format {
        Format::Json => print_json(&Report {
            model: model.name(),
            charge: model.label(charge),
            routing: args.anyon.routing.to_string(),
            seed,
            max_attempts: args.run.max_attempts,
            sigmas: k,
            summary,
            checks,
            pass,
            trials: rows,
        })?,
        Format::Csv => print_csv(&rows)?,
        Format::Table => print_table(model.name(), model.label(charge), &summary, pass),
    }
    Ok(pass)
}

fn print_table(model: &str, charge: &str, s: &TeleportSummary, pass: bool) {
    println!("{model}, a = {charge}: {} trials, {} over the attempt limit", s.trials, s.exceeded);
    println!("{:>6} {:>9} {:>9} {:>9} {:>9} {:>7}", "e", "attempts", "P(f=0|e)", "expected", "sigma", "z");
    for c in &s.channels {
        println!(
            "{:>6} {:>9} {:>9.5} {:>9.5} {:>9.5} {:>+7.2}",
            c.e, c.attempts, c.empirical, c.expected, c.sigma, c.z
        );
    }
    println!("mean attempts {:.5} +- {:.5} (bound d_a^2 = {:.5})", s.mean_attempts, s.mean_sigma, s.attempt_bound);
    for t in &s.tails {
        println!("P(attempts > {:>2}) = {:.3e} (bound {:.3e}, sigma {:.1e})", t.n, t.empirical, t.bound, t.sigma);
    }
    println!("{}", if pass { "pass" } else { "FAIL" });
}
