use anyhow::Result;
use clap::Args;
use mtqc_core::model::DEFAULT_TOLERANCE;
use serde::Serialize;

use crate::args::{Format, ModelArgs};
use crate::output::{print_csv, print_json};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Largest residual that still passes.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Serialize)]
struct Row<'a> {
    model: &'a str,
    gauge: &'a str,
    pentagon: f64,
    hexagon: f64,
    unitarity: f64,
    qdim: f64,
    tolerance: f64,
    pass: bool,
}

pub fn run(args: &VerifyArgs) -> Result<bool> {
    // Model files are loaded without the consistency gate so that the
    // report can show the residuals of a failing model.
    let (m, _) = args.model.load(f64::INFINITY)?;
    let r = m.verify_consistency(args.tolerance);
    let row = Row {
        model: m.name(),
        gauge: m.gauge(),
        pentagon: r.max_pentagon_residual,
        hexagon: r.max_hexagon_residual,
        unitarity: r.max_unitarity_residual,
        qdim: r.qdim_residual,
        tolerance: r.tolerance,
        pass: r.pass,
    };
    match args.format {
        Format::Json => print_json(&row)?,
        Format::Csv => print_csv(&[row])?,
        Format::Table => println!("{}: {} -> {}", m.name(), r.summary(), if r.pass { "pass" } else { "FAIL" }),
    }
    Ok(r.pass)
}
