use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use mtqc_core::trace::{TraceBuilder, TraceEvent};
use mtqc_core::{
    build_array, compile as compile_word, direct_braid_reference, embed_register, execute, trial_rng, BraidWord,
    Schedule, ScheduleStep,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{read, usage, AnyonArgs, Format, RunArgs as StochasticArgs};
use crate::braid::random_register;
use crate::output::{print_csv, print_json, write_trace};

#[derive(Args, Debug)]
pub struct CompileArgs {
    #[command(flatten)]
    pub anyon: AnyonArgs,
    #[arg(long)]
    pub word: String,
    /// Number of computational anyons (default: as many as the word needs).
    #[arg(long)]
    pub anyons: Option<usize>,
    #[arg(long)]
    pub economy: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Serialize)]
struct ForcedRow {
    step: usize,
    generator: String,
    forced: usize,
    target_i: usize,
    target_j: usize,
    recovery_i: usize,
    recovery_j: usize,
}

pub fn compile(args: &CompileArgs) -> Result<bool> {
    let (model, charge) = args.anyon.load()?;
    let word: BraidWord = args.word.parse().map_err(usage)?;
    let anyons = args.anyons.unwrap_or(word.strands().max(2));
    let (layout, _) = build_array(model, charge, anyons, args.economy, args.anyon.routing).map_err(usage)?;
    let schedule = compile_word(&word, &layout).map_err(usage)?;
    match args.format {
        Format::Json => println!("{}", schedule.to_json()),
        Format::Csv | Format::Table => {
            let mut rows = Vec::new();
            for (step, s) in schedule.steps.iter().enumerate() {
                if let ScheduleStep::Braid { generator, forced, .. } = s {
                    for (k, f) in forced.iter().enumerate() {
                        rows.push(ForcedRow {
                            step,
                            generator: generator.to_string(),
                            forced: k,
                            target_i: f.target.0,
                            target_j: f.target.1,
                            recovery_i: f.recovery.0,
                            recovery_j: f.recovery.1,
                        });
                    }
                }
            }
            if args.format == Format::Csv {
                print_csv(&rows)?;
            } else {
                for r in &rows {
                    println!(
                        "{:>3} {:<4} forced {}: target ({}, {}) <- recovery ({}, {})",
                        r.step, r.generator, r.forced, r.target_i, r.target_j, r.recovery_i, r.recovery_j
                    );
                }
            }
        }
    }
    Ok(true)
}

#[derive(Args, Debug)]
pub struct ScheduleRunArgs {
    #[command(flatten)]
    pub anyon: AnyonArgs,
    #[command(flatten)]
    pub run: StochasticArgs,
    /// Schedule file as written by `compile`.
    #[arg(long)]
    pub schedule: PathBuf,
    /// Start each trial from a random encoded state instead of vacuum pairs.
    #[arg(long)]
    pub random_input: bool,
    /// Smallest accepted value of 1 - fidelity.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Serialize)]
struct RunRow {
    trial: u64,
    braids: usize,
    attempts: usize,
    /// Against the direct braid; absent when the schedule reads out charges.
    fidelity: Option<f64>,
    outcomes: String,
    readouts: String,
}

#[derive(Serialize)]
struct RunReport<'a> {
    model: &'a str,
    seed: u64,
    forced_measurements: usize,
    pass: bool,
    trials: Vec<RunRow>,
}

pub fn run(args: &ScheduleRunArgs) -> Result<bool> {
    let (model, charge) = args.anyon.load()?;
    let schedule = Schedule::from_json(&read(&args.schedule)?).map_err(usage)?;
    if schedule.model != model.name() || schedule.charge != charge || schedule.routing != args.anyon.routing {
        return Err(usage(format!(
            "schedule was compiled for model {} (charge index {}, {} routing)",
            schedule.model,
            schedule.charge.index(),
            schedule.routing
        )));
    }
    let word = BraidWord(
        schedule
            .steps
            .iter()
            .filter_map(|s| match s {
                ScheduleStep::Braid { generator, .. } => Some(*generator),
                ScheduleStep::Readout { .. } => None,
            })
            .collect(),
    );
    let has_readouts = schedule.steps.iter().any(|s| matches!(s, ScheduleStep::Readout { .. }));
    let (n, economy, routing) = (schedule.computational, schedule.self_dual_economy, schedule.routing);
    build_array(model.clone(), charge, n, economy, routing).map_err(usage)?;
    let seed = args.run.seed;
    let results = (0..args.run.trials)
        .into_par_iter()
        .map(|t| -> mtqc_core::Result<(RunRow, Vec<TraceEvent>)> {
            let mut rng = trial_rng(seed, t);
            let (layout, state) = if args.random_input {
                embed_register(&random_register(&model, charge, n, &mut rng)?, economy, routing)?
            } else {
                build_array(model.clone(), charge, n, economy, routing)?
            };
            let (out, log) = execute(&schedule, &layout, &state, &mut rng, args.run.max_attempts)?;
            let fidelity = if has_readouts {
                None
            } else {
                Some(direct_braid_reference(&word, &layout, &state)?.fidelity(&out)?)
            };
            let mut trace = TraceBuilder::new(&model, t);
            for (k, b) in log.braids.iter().enumerate() {
                trace.braid(k, b);
            }
            for r in &log.readouts {
                trace.measurement(None, 0, r);
            }
            let label = |c| model.label(c).to_string();
            let row = RunRow {
                trial: t,
                braids: log.braids.len(),
                attempts: log.braids.iter().map(|b| b.attempts()).sum(),
                fidelity,
                outcomes: log
                    .braids
                    .iter()
                    .map(|b| b.outcome_string().into_iter().map(label).collect::<Vec<_>>().join(" "))
                    .collect::<Vec<_>>()
                    .join("|"),
                readouts: log.readouts.iter().map(|r| label(r.charge)).collect::<Vec<_>>().join(" "),
            };
            Ok((row, trace.finish()))
        })
        .collect::<mtqc_core::Result<Vec<_>>>()?;
    if let Some(path) = &args.run.log {
        write_trace(path, results.iter().flat_map(|r| &r.1))?;
    }
    let rows: Vec<RunRow> = results.into_iter().map(|r| r.0).collect();
    let pass = rows.iter().all(|r| r.fidelity.map_or(true, |f| f >= 1.0 - args.tolerance));
    match args.run.format {
        Format::Json => print_json(&RunReport {
            model: model.name(),
            seed,
            forced_measurements: schedule.forced_count(),
            pass,
            trials: rows,
        })?,
        Format::Csv => print_csv(&rows)?,
        Format::Table => {
            for r in &rows {
                let fid = r.fidelity.map(|f| format!("{f:.9}")).unwrap_or_else(|| "-".into());
                println!("trial {:>4}: {} braids, {} attempts, fidelity {fid}", r.trial, r.braids, r.attempts);
            }
            println!("{}", if pass { "pass" } else { "FAIL" });
        }
    }
    Ok(pass)
}
