use std::sync::Arc;

use anyhow::Result;
use clap::Args;
use mtqc_core::compiler::RESTORATION_TOLERANCE;
use mtqc_core::trace::{TraceBuilder, TraceEvent};
use mtqc_core::{
    build_array, compile, direct_braid_reference, embed_register, execute, pair_charge_distribution, relative_phase,
    standard_basis, trial_rng, AnyonModel, ArrayLayout, BraidWord, Charge, ExecutionLog, StateVector,
};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{usage, AnyonArgs, Format, RunArgs};
use crate::output::{print_csv, print_json, write_trace};

#[derive(Args, Debug)]
pub struct BraidCheckArgs {
    #[command(flatten)]
    pub anyon: AnyonArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Braid word, e.g. "s1 s2' s1" (apostrophe marks the inverse).
    #[arg(long)]
    pub word: String,
    /// Second word expected to give the same operator up to phase.
    #[arg(long)]
    pub compare: Option<String>,
    /// Number of computational anyons (default: as many as the words need).
    #[arg(long)]
    pub anyons: Option<usize>,
    /// One resource anyon per gap instead of one pair.
    #[arg(long)]
    pub economy: bool,
    /// Start each trial from a random encoded state instead of vacuum pairs.
    #[arg(long)]
    pub random_input: bool,
    /// Smallest accepted value of 1 - fidelity.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Serialize, Clone)]
struct TrialRow {
    trial: u64,
    fidelity: f64,
    phase_re: f64,
    phase_im: f64,
    attempts: usize,
    restore_deviation: f64,
    /// Outcome strings of the braids, `|`-separated.
    outcomes: String,
    compare_fidelity: Option<f64>,
}

#[derive(Serialize)]
struct Report<'a> {
    model: &'a str,
    charge: &'a str,
    routing: String,
    economy: bool,
    anyons: usize,
    word: String,
    compare: Option<String>,
    seed: u64,
    tolerance: f64,
    min_fidelity: f64,
    min_compare_fidelity: Option<f64>,
    pass: bool,
    trials: Vec<TrialRow>,
}

/// A random state on `n` leaves of charge `a` with a random reachable total.
pub fn random_register<R: Rng>(m: &Arc<AnyonModel>, a: Charge, n: usize, rng: &mut R) -> mtqc_core::Result<StateVector> {
    let leaves = vec![a; n];
    let mut totals = Vec::new();
    for t in m.charges() {
        if !standard_basis(m, &leaves, t)?.is_empty() {
            totals.push(t);
        }
    }
    let total = totals[rng.random_range(0..totals.len())];
    StateVector::random(m.clone(), &leaves, total, rng)
}

fn outcome_strings(m: &AnyonModel, log: &ExecutionLog) -> String {
    log.braids
        .iter()
        .map(|b| b.outcome_string().iter().map(|&c| m.label(c)).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("|")
}

fn restore_deviation(layout: &ArrayLayout, state: &StateVector) -> mtqc_core::Result<f64> {
    let mut worst = 0.0f64;
    for &(i, j) in &layout.resources {
        let d = pair_charge_distribution(state, i, j, layout.routing)?;
        worst = worst.max((d.prob(Charge::VACUUM) - 1.0).abs());
    }
    Ok(worst)
}

fn parse_word(text: &str) -> Result<BraidWord> {
    text.parse().map_err(usage)
}

pub fn run(args: &BraidCheckArgs) -> Result<bool> {
    let (model, charge) = args.anyon.load()?;
    let word = parse_word(&args.word)?;
    let compare = args.compare.as_deref().map(parse_word).transpose()?;
    let needed = word.strands().max(compare.as_ref().map_or(0, |w| w.strands())).max(2);
    let anyons = args.anyons.unwrap_or(needed);
    let routing = args.anyon.routing;
    // Validate the layout and words once, as usage errors.
    let (layout, _) = build_array(model.clone(), charge, anyons, args.economy, routing).map_err(usage)?;
    compile(&word, &layout).map_err(usage)?;
    if let Some(c) = &compare {
        compile(c, &layout).map_err(usage)?;
    }

    let seed = args.run.seed;
    let max = args.run.max_attempts;
    let results = (0..args.run.trials)
        .into_par_iter()
        .map(|t| -> mtqc_core::Result<(TrialRow, Vec<TraceEvent>)> {
            let mut rng = trial_rng(seed, t);
            let (layout, state) = if args.random_input {
                embed_register(&random_register(&model, charge, anyons, &mut rng)?, args.economy, routing)?
            } else {
                build_array(model.clone(), charge, anyons, args.economy, routing)?
            };
            let (out, log) = execute(&compile(&word, &layout)?, &layout, &state, &mut rng, max)?;
            let oracle = direct_braid_reference(&word, &layout, &state)?;
            let fidelity = oracle.fidelity(&out)?;
            let phase = relative_phase(&oracle, &out).unwrap_or_default();
            let mut restore = restore_deviation(&layout, &out)?;
            let mut trace = TraceBuilder::new(&model, t);
            for (k, b) in log.braids.iter().enumerate() {
                trace.braid(k, b);
            }
            let mut compare_fidelity = None;
            if let Some(c) = &compare {
                let (out2, log2) = execute(&compile(c, &layout)?, &layout, &state, &mut rng, max)?;
                restore = restore.max(restore_deviation(&layout, &out2)?);
                for (k, b) in log2.braids.iter().enumerate() {
                    trace.braid(log.braids.len() + k, b);
                }
                compare_fidelity = Some(out.fidelity(&out2)?);
            }
            let row = TrialRow {
                trial: t,
                fidelity,
                phase_re: phase.re,
                phase_im: phase.im,
                attempts: log.braids.iter().map(|b| b.attempts()).sum(),
                restore_deviation: restore,
                outcomes: outcome_strings(&model, &log),
                compare_fidelity,
            };
            Ok((row, trace.finish()))
        })
        .collect::<mtqc_core::Result<Vec<_>>>()?;
    if let Some(path) = &args.run.log {
        write_trace(path, results.iter().flat_map(|r| &r.1))?;
    }
    let rows: Vec<TrialRow> = results.into_iter().map(|r| r.0).collect();
    let min_fidelity = rows.iter().map(|r| r.fidelity).fold(1.0, f64::min);
    let min_compare_fidelity = compare.as_ref().map(|_| rows.iter().filter_map(|r| r.compare_fidelity).fold(1.0, f64::min));
    let pass = min_fidelity >= 1.0 - args.tolerance
        && min_compare_fidelity.map_or(true, |f| f >= 1.0 - args.tolerance)
        && rows.iter().all(|r| r.restore_deviation <= RESTORATION_TOLERANCE);
    match args.run.format {
        Format::Json => print_json(&Report {
            model: model.name(),
            charge: model.label(charge),
            routing: routing.to_string(),
            economy: args.economy,
            anyons,
            word: word.to_string(),
            compare: compare.as_ref().map(|c| c.to_string()),
            seed,
            tolerance: args.tolerance,
            min_fidelity,
            min_compare_fidelity,
            pass,
            trials: rows,
        })?,
        Format::Csv => print_csv(&rows)?,
        Format::Table => {
            println!("{} on {anyons} anyons of charge {} ({routing} routing)", word, model.label(charge));
            for r in &rows {
                println!(
                    "trial {:>4}: fidelity {:.9}, phase {:+.6}{:+.6}i, attempts {}{}",
                    r.trial,
                    r.fidelity,
                    r.phase_re,
                    r.phase_im,
                    r.attempts,
                    r.compare_fidelity.map(|f| format!(", compare fidelity {f:.9}")).unwrap_or_default()
                );
            }
            println!("{}", if pass { "pass" } else { "FAIL" });
        }
    }
    Ok(pass)
}
