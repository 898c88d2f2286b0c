//! Monte Carlo statistics of forced-measurement teleportation. Each trial
//! draws from its own stream, so trials can run in any order or in parallel
//! and still aggregate to the same numbers.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::StateVector;
use crate::measurement::Routing;
use crate::model::{AnyonModel, Charge};
use crate::rng::trial_rng;
use crate::teleport::{expected_attempt_bound, failure_tail_probability, forced_measurement, MeasurementRecord};
use crate::trace::{TraceBuilder, TraceEvent};

/// Attempt counts whose tail fractions are reported.
pub const TAIL_POINTS: [u32; 3] = [5, 10, 20];

/// The fixed setting of one Monte Carlo run.
#[derive(Clone, Debug)]
pub struct TeleportSetup {
    pub model: Arc<AnyonModel>,
    pub charge: Charge,
    pub routing: Routing,
    pub max_attempts: usize,
}

/// One trial: either a completed forced measurement or a run that hit the
/// attempt limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: u64,
    pub attempts: usize,
    /// Labels of `e1, f1, ..., fn`.
    pub outcomes: Vec<String>,
    pub exceeded: bool,
    pub events: Vec<TraceEvent>,
}

impl TeleportSetup {
    /// The teleportation input: leaf 0 of a vacuum pair `(a, abar)` followed
    /// by a resource pair `(abar, a)`. Outcome statistics do not depend on
    /// the encoded state.
    pub fn initial_state(&self) -> Result<StateVector> {
        let a = self.charge;
        let pair = StateVector::entangled_pair(self.model.clone(), a)?;
        pair.attach_pair(1, self.model.dual(a))
    }

    /// Runs trial `trial` under `seed`.
    pub fn run_trial(&self, seed: u64, trial: u64) -> Result<TrialOutcome> {
        let state = self.initial_state()?;
        let mut rng = trial_rng(seed, trial);
        match forced_measurement(&state, (0, 1), (1, 2), self.routing, &mut rng, self.max_attempts) {
            Ok((_, rec)) => Ok(self.outcome(trial, &rec)),
            Err(Error::MaxAttemptsExceeded(_)) => Ok(TrialOutcome {
                trial,
                attempts: self.max_attempts,
                outcomes: Vec::new(),
                exceeded: true,
                events: Vec::new(),
            }),
            Err(e) => Err(e),
        }
    }

    fn outcome(&self, trial: u64, rec: &MeasurementRecord) -> TrialOutcome {
        let mut trace = TraceBuilder::new(&self.model, trial);
        trace.forced(None, 0, rec);
        TrialOutcome {
            trial,
            attempts: rec.attempts,
            outcomes: rec.outcomes.iter().map(|&c| self.model.label(c).to_string()).collect(),
            exceeded: false,
            events: trace.finish(),
        }
    }
}

/// Success rate of the target measurement given the recovery outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    pub e: String,
    pub attempts: u64,
    pub successes: u64,
    pub empirical: f64,
    pub expected: f64,
    pub sigma: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailStats {
    pub n: u32,
    pub empirical: f64,
    pub bound: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeleportSummary {
    pub trials: u64,
    pub exceeded: u64,
    pub mean_attempts: f64,
    /// Standard error of the mean.
    pub mean_sigma: f64,
    pub attempt_bound: f64,
    pub channels: Vec<ChannelStats>,
    pub tails: Vec<TailStats>,
}

fn z_score(x: f64, mu: f64, sigma: f64) -> f64 {
    if sigma > 0.0 {
        (x - mu) / sigma
    } else if x == mu {
        0.0
    } else {
        f64::INFINITY.copysign(x - mu)
    }
}

/// Aggregates trials. Trials that hit the attempt limit count towards the
/// tails but not towards the mean.
pub fn summarize(model: &AnyonModel, a: Charge, trials: &[TrialOutcome]) -> Result<TeleportSummary> {
    let da2 = expected_attempt_bound(model, a);
    let mut per_e: BTreeMap<Charge, (u64, u64)> = BTreeMap::new();
    let mut done = Vec::new();
    for t in trials.iter().filter(|t| !t.exceeded) {
        let charges = t.outcomes.iter().map(|l| model.charge(l)).collect::<Result<Vec<_>>>()?;
        for pair in charges.chunks(2) {
            let slot = per_e.entry(pair[0]).or_default();
            slot.0 += 1;
            slot.1 += u64::from(pair.get(1) == Some(&Charge::VACUUM));
        }
        done.push(t.attempts as f64);
    }
    let n_done = done.len() as f64;
    let mean = if done.is_empty() { 0.0 } else { done.iter().sum::<f64>() / n_done };
    let var = if done.len() > 1 { done.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n_done - 1.0) } else { 0.0 };
    let channels = per_e
        .into_iter()
        .map(|(e, (n, s))| {
            let expected = model.qdim(e) / da2;
            let empirical = s as f64 / n as f64;
            let sigma = (expected * (1.0 - expected) / n as f64).sqrt();
            ChannelStats {
                e: model.label(e).to_string(),
                attempts: n,
                successes: s,
                empirical,
                expected,
                sigma,
                z: z_score(empirical, expected, sigma),
            }
        })
        .collect();
    let total = trials.len() as f64;
    let tails = TAIL_POINTS
        .iter()
        .map(|&n| {
            let over = trials.iter().filter(|t| t.exceeded || t.attempts > n as usize).count() as f64;
            let bound = failure_tail_probability(model, a, n);
            TailStats { n, empirical: over / total, bound, sigma: (bound * (1.0 - bound) / total).sqrt() }
        })
        .collect();
    Ok(TeleportSummary {
        trials: trials.len() as u64,
        exceeded: trials.iter().filter(|t| t.exceeded).count() as u64,
        mean_attempts: mean,
        mean_sigma: (var / n_done.max(1.0)).sqrt(),
        attempt_bound: da2,
        channels,
        tails,
    })
}
