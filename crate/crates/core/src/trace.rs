//! Line-oriented measurement traces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::measurement::{MeasurementOutcome, Routing};
use crate::model::AnyonModel;
use crate::teleport::{BraidRecord, MeasurementRecord};

/// One projective measurement within a trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub trial: u64,
    /// Index of the braid within the trial, if the measurement belongs to one.
    pub braid: Option<usize>,
    /// Index of the forced measurement within the braid or trial.
    pub forced: usize,
    pub i: usize,
    pub j: usize,
    pub routing: Routing,
    pub outcome: String,
    pub probability: f64,
    pub cumulative_log_probability: f64,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trial={}", self.trial)?;
        if let Some(b) = self.braid {
            write!(f, " braid={b}")?;
        }
        write!(
            f,
            " forced={} pair=({},{}) routing={} outcome={} p={:?} logp={:?}",
            self.forced, self.i, self.j, self.routing, self.outcome, self.probability, self.cumulative_log_probability
        )
    }
}

/// Accumulates events of one trial, keeping the running log-probability.
pub struct TraceBuilder<'m> {
    model: &'m AnyonModel,
    trial: u64,
    log_p: f64,
    events: Vec<TraceEvent>,
}

impl<'m> TraceBuilder<'m> {
    pub fn new(model: &'m AnyonModel, trial: u64) -> Self {
        TraceBuilder { model, trial, log_p: 0.0, events: Vec::new() }
    }

    pub fn measurement(&mut self, braid: Option<usize>, forced: usize, m: &MeasurementOutcome) {
        self.log_p += m.probability.ln();
        self.events.push(TraceEvent {
            trial: self.trial,
            braid,
            forced,
            i: m.pair.0,
            j: m.pair.1,
            routing: m.routing,
            outcome: self.model.label(m.charge).to_string(),
            probability: m.probability,
            cumulative_log_probability: self.log_p,
        });
    }

    pub fn forced(&mut self, braid: Option<usize>, forced: usize, rec: &MeasurementRecord) {
        for m in &rec.events {
            self.measurement(braid, forced, m);
        }
    }

    pub fn braid(&mut self, braid: usize, rec: &BraidRecord) {
        for (k, step) in rec.steps.iter().enumerate() {
            self.forced(Some(braid), k, step);
        }
    }

    pub fn finish(self) -> Vec<TraceEvent> {
        self.events
    }
}
