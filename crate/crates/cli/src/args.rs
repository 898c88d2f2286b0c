//! Flags shared by several commands and how they resolve to a model.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Result;
use clap::{Args, ValueEnum};
use mtqc_core::model::{parse_model_file, DEFAULT_TOLERANCE};
use mtqc_core::teleport::DEFAULT_MAX_ATTEMPTS;
use mtqc_core::{AnyonModel, BuiltinModel, Charge, Routing};

/// Bad input: unknown names, malformed files or words. Exits with 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(e: impl fmt::Display) -> anyhow::Error {
    UsageError(e.to_string()).into()
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Builtin model: fibonacci, ising, su2_k (with --k) or su2_<k>.
    #[arg(long, required_unless_present = "model_file")]
    pub model: Option<String>,
    /// Level of su2_k.
    #[arg(long)]
    pub k: Option<u32>,
    /// Model file in the declarative text format.
    #[arg(long, conflicts_with_all = ["model", "k"])]
    pub model_file: Option<PathBuf>,
}

impl ModelArgs {
    /// Loads the model; a model file must pass the consistency checks at
    /// `tolerance`.
    pub fn load(&self, tolerance: f64) -> Result<(Arc<AnyonModel>, Option<BuiltinModel>)> {
        if let Some(path) = &self.model_file {
            let text = read(path)?;
            let m = parse_model_file(&text, tolerance).map_err(usage)?;
            return Ok((Arc::new(m), None));
        }
        let name = self.model.as_deref().unwrap_or_default();
        let which = match self.k {
            Some(k) => BuiltinModel::from_name(name, Some(k)),
            None => name.parse(),
        }
        .map_err(usage)?;
        Ok((Arc::new(mtqc_core::load_builtin(which)?), Some(which)))
    }
}

#[derive(Args, Debug, Clone)]
pub struct AnyonArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Label of the computational charge; defaults to the model's natural
    /// choice (1 for fibonacci, 1/2 otherwise, else the first nontrivial).
    #[arg(long)]
    pub charge: Option<String>,
    /// How lines of non-adjacent measurements pass intervening anyons.
    #[arg(long, default_value_t = Routing::Under)]
    pub routing: Routing,
}

impl AnyonArgs {
    pub fn load(&self) -> Result<(Arc<AnyonModel>, Charge)> {
        let (m, which) = self.model.load(DEFAULT_TOLERANCE)?;
        let charge = match (&self.charge, which) {
            (Some(label), _) => m.charge(label).map_err(usage)?,
            (None, Some(w)) => m.charge(w.computational_label())?,
            (None, None) => {
                m.charges().find(|c| !c.is_vacuum()).ok_or_else(|| usage("model has no nontrivial charge"))?
            }
        };
        Ok((m, charge))
    }
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Master seed; trial t draws from stream t of this seed.
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Attempts allowed per forced measurement.
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write one trace line per measurement to this file.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    /// Human-readable summary.
    Table,
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}
