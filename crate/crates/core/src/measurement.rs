//! Projective measurement of the collective charge of two anyons.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{BraidSign, FMoveDirection, StateVector};
use crate::model::{AnyonModel, Charge};

/// Outcomes less likely than this are treated as impossible.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// How the line of leaf `j` is carried next to leaf `i` when measuring a
/// non-adjacent pair: in front of (over) or behind (under) the leaves
/// between them, as seen in the braid diagram.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Routing {
    Over,
    #[default]
    Under,
}

impl Routing {
    /// Sign of the generator that moves a leaf one step to the left.
    pub fn leftward_sign(self) -> BraidSign {
        match self {
            // A leaf moving left over its neighbour is a clockwise exchange.
            Routing::Over => BraidSign::Negative,
            Routing::Under => BraidSign::Positive,
        }
    }

    pub fn mirror(self) -> Self {
        match self {
            Routing::Over => Routing::Under,
            Routing::Under => Routing::Over,
        }
    }
}

impl fmt::Display for Routing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Routing::Over => "over",
            Routing::Under => "under",
        })
    }
}

impl FromStr for Routing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "over" => Ok(Routing::Over),
            "under" => Ok(Routing::Under),
            _ => Err(Error::InvalidParameter(format!("routing `{s}` (expected over or under)"))),
        }
    }
}

/// Born probabilities of every charge of a model for one pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChargeDistribution {
    probs: Vec<f64>,
}

impl ChargeDistribution {
    pub fn prob(&self, c: Charge) -> f64 {
        self.probs.get(c.0).copied().unwrap_or(0.0)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Charges with probability above the floor.
    pub fn support(&self) -> impl Iterator<Item = (Charge, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= PROBABILITY_FLOOR)
            .map(|(c, &p)| (Charge(c), p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Largest deviation from a reference probability vector.
    pub fn max_deviation(&self, expected: &[(Charge, f64)]) -> f64 {
        let mut target = vec![0.0; self.probs.len()];
        for &(c, p) in expected {
            if let Some(t) = target.get_mut(c.0) {
                *t = p;
            }
        }
        self.probs.iter().zip(&target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Inverse-CDF sampling with `u` uniform in `[0, 1)`. Impossible outcomes
    /// are never returned.
    pub fn sample_with(&self, u: f64) -> Charge {
        let mut acc = 0.0;
        let mut last = None;
        for (c, p) in self.support() {
            acc += p;
            last = Some(c);
            if u * self.total() < acc {
                return c;
            }
        }
        last.expect("distribution has support")
    }
}

/// Result of one projective measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementOutcome {
    pub pair: (usize, usize),
    pub charge: Charge,
    pub probability: f64,
    pub routing: Routing,
}

/// Supplies measurement outcomes: either sampled or replayed.
pub trait OutcomeSource {
    fn choose(&mut self, dist: &ChargeDistribution) -> Result<Charge>;
}

/// Born-rule sampling from a random stream.
pub struct Sampler<'a, R: Rng + ?Sized>(pub &'a mut R);

impl<R: Rng + ?Sized> OutcomeSource for Sampler<'_, R> {
    fn choose(&mut self, dist: &ChargeDistribution) -> Result<Charge> {
        let u: f64 = self.0.random();
        Ok(dist.sample_with(u))
    }
}

/// Replays a fixed outcome string, failing on impossible outcomes.
#[derive(Clone, Debug)]
pub struct Scripted {
    outcomes: Vec<Charge>,
    next: usize,
}

impl Scripted {
    pub fn new(outcomes: Vec<Charge>) -> Self {
        Scripted { outcomes, next: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.outcomes.len() - self.next
    }
}

impl OutcomeSource for Scripted {
    fn choose(&mut self, dist: &ChargeDistribution) -> Result<Charge> {
        let c = *self
            .outcomes
            .get(self.next)
            .ok_or_else(|| Error::Precondition("scripted outcome string exhausted".into()))?;
        self.next += 1;
        let p = dist.prob(c);
        if p < PROBABILITY_FLOOR {
            return Err(Error::ZeroProbabilityOutcome { i: 0, j: 0, charge: c.0, probability: p });
        }
        Ok(c)
    }
}

fn ordered(state: &StateVector, i: usize, j: usize) -> Result<(usize, usize)> {
    let n = state.num_leaves();
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    if i == j || j >= n {
        return Err(Error::OutOfRange(format!("pair ({i}, {j}) in a register of {n} leaves")));
    }
    Ok((i, j))
}

/// Moves leaf `j` to position `i + 1`.
fn bring_adjacent(state: &StateVector, i: usize, j: usize, routing: Routing) -> Result<StateVector> {
    let sign = routing.leftward_sign();
    let mut s = state.clone();
    for p in (i + 1..j).rev() {
        s = s.apply_braid(p, sign)?;
    }
    Ok(s)
}

/// Undoes [`bring_adjacent`].
fn send_back(state: &StateVector, i: usize, j: usize, routing: Routing) -> Result<StateVector> {
    let sign = routing.leftward_sign().inverse();
    let mut s = state.clone();
    for p in i + 1..j {
        s = s.apply_braid(p, sign)?;
    }
    Ok(s)
}

fn adjacent_distribution(state: &StateVector, i: usize) -> Result<ChargeDistribution> {
    let m = state.model();
    let mut probs = vec![0.0; m.num_charges()];
    if i == 0 {
        for (t, a) in state.trees().iter().zip(state.amplitudes()) {
            probs[t.chain(1).0] += a.norm_sqr();
        }
    } else {
        let moved = state.apply_f_move(i, FMoveDirection::Forward)?;
        for (t, a) in moved.trees().iter().zip(moved.amplitudes()) {
            probs[t.internals[i - 1].0] += a.norm_sqr();
        }
    }
    Ok(ChargeDistribution { probs })
}

fn adjacent_projection(state: &StateVector, i: usize, c: Charge) -> Result<StateVector> {
    let zero = C64::new(0.0, 0.0);
    let keep = |amps: &[C64], label: &dyn Fn(usize) -> Charge| -> Vec<C64> {
        amps.iter().enumerate().map(|(k, &a)| if label(k) == c { a } else { zero }).collect()
    };
    if i == 0 {
        let amps = keep(state.amplitudes(), &|k| state.trees()[k].chain(1));
        return StateVector::from_amplitudes(state.space().clone(), amps);
    }
    let moved = state.apply_f_move(i, FMoveDirection::Forward)?;
    let amps = keep(moved.amplitudes(), &|k| moved.trees()[k].internals[i - 1]);
    let projected = StateVector::from_parts(moved.space().clone(), amps).into_state_unchecked();
    let back = projected.apply_f_move(i, FMoveDirection::Backward)?;
    StateVector::from_amplitudes(back.space().clone(), back.amplitudes().to_vec())
}

/// Born probabilities for the collective charge of leaves `i` and `j`.
pub fn pair_charge_distribution(state: &StateVector, i: usize, j: usize, routing: Routing) -> Result<ChargeDistribution> {
    let (i, j) = ordered(state, i, j)?;
    let near = bring_adjacent(state, i, j, routing)?;
    adjacent_distribution(&near, i)
}

/// Projects leaves `i`, `j` onto charge `c` and renormalizes. Returns the
/// post-measurement state and the Born probability of `c`.
pub fn project_pair(state: &StateVector, i: usize, j: usize, c: Charge, routing: Routing) -> Result<(StateVector, f64)> {
    let (i, j) = ordered(state, i, j)?;
    state.model().check(c)?;
    let near = bring_adjacent(state, i, j, routing)?;
    let p = adjacent_distribution(&near, i)?.prob(c);
    if p < PROBABILITY_FLOOR {
        return Err(Error::ZeroProbabilityOutcome { i, j, charge: c.0, probability: p });
    }
    let projected = adjacent_projection(&near, i, c)?;
    Ok((send_back(&projected, i, j, routing)?, p))
}

/// Measures leaves `i`, `j` with outcomes drawn from `source`.
pub fn measure_with(
    state: &StateVector,
    i: usize,
    j: usize,
    routing: Routing,
    source: &mut dyn OutcomeSource,
) -> Result<(MeasurementOutcome, StateVector)> {
    let (i, j) = ordered(state, i, j)?;
    let near = bring_adjacent(state, i, j, routing)?;
    let dist = adjacent_distribution(&near, i)?;
    let charge = source.choose(&dist).map_err(|e| match e {
        Error::ZeroProbabilityOutcome { charge, probability, .. } => {
            Error::ZeroProbabilityOutcome { i, j, charge, probability }
        }
        other => other,
    })?;
    let probability = dist.prob(charge);
    let projected = adjacent_projection(&near, i, charge)?;
    let out = send_back(&projected, i, j, routing)?;
    Ok((MeasurementOutcome { pair: (i, j), charge, probability, routing }, out))
}

/// Samples a measurement of leaves `i`, `j` by the Born rule.
pub fn sample_measurement<R: Rng + ?Sized>(
    state: &StateVector,
    i: usize,
    j: usize,
    rng: &mut R,
    routing: Routing,
) -> Result<(MeasurementOutcome, StateVector)> {
    measure_with(state, i, j, routing, &mut Sampler(rng))
}

/// Probability that a pair drawn from `fuse(a, b)` in a maximally mixed
/// way has charge `c`: `d_c / (d_a d_b)`.
pub fn uniform_channel_probability(model: &AnyonModel, a: Charge, b: Charge, c: Charge) -> f64 {
    if !model.fuses(a, b, c) {
        return 0.0;
    }
    model.qdim(c) / (model.qdim(a) * model.qdim(b))
}
