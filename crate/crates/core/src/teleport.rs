//! Forced-measurement teleportation and braids built from three forced
//! measurements.

use std::fmt;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{BraidSign, DiagramIsotopyNote, StateVector};
use crate::measurement::{
    measure_with, pair_charge_distribution, project_pair, MeasurementOutcome, OutcomeSource, Routing, Sampler,
};
use crate::model::{AnyonModel, Charge};

pub const DEFAULT_MAX_ATTEMPTS: usize = 1000;

/// States whose overlap is below `1 - PHASE_EQUIVALENCE_TOLERANCE` are not
/// considered equal up to phase.
pub const PHASE_EQUIVALENCE_TOLERANCE: f64 = 1e-6;

/// Minimum weight of the vacuum channel for a pair to count as a resource.
pub const VACUUM_TOLERANCE: f64 = 1e-9;

/// The global phase `<s1|s2> / |<s1|s2>|` by which two states differ.
pub fn relative_phase(s1: &StateVector, s2: &StateVector) -> Result<C64> {
    let z = s1.inner(s2)?;
    let r = z.norm();
    if r < 1.0 - PHASE_EQUIVALENCE_TOLERANCE {
        return Err(Error::NotPhaseEquivalent(r));
    }
    Ok(z / r)
}

/// `d_a^2`, the bound on the mean number of attempts.
pub fn expected_attempt_bound(model: &AnyonModel, a: Charge) -> f64 {
    model.qdim(a).powi(2)
}

/// `(1 - d_a^-2)^n`, the bound on the probability that the first `n`
/// attempts all fail.
pub fn failure_tail_probability(model: &AnyonModel, a: Charge, n: u32) -> f64 {
    (1.0 - model.qdim(a).powi(-2)).powi(n as i32)
}

/// The two ends of a teleportation of leaf `p` of `register` (charge `a`):
/// the input with a resource pair `(abar, a)` inserted right of `p`, and
/// the target state where the information sits two leaves to the right and
/// `p`, `p + 1` hold the pair `(a, abar)`. A single successful projection
/// of `(p, p + 1)` maps the input to the target times the note's factor.
pub fn teleport_endpoints(register: &StateVector, p: usize) -> Result<(StateVector, StateVector, DiagramIsotopyNote)> {
    let n = register.num_leaves();
    if p >= n {
        return Err(Error::OutOfRange(format!("leaf {p} in a register of {n} leaves")));
    }
    let m = register.model().clone();
    let a = register.leaves()[p];
    let input = register.attach_pair(p + 1, m.dual(a))?;
    let target = register.attach_pair(p, a)?;
    let mut note = DiagramIsotopyNote::default();
    // Straightening the line that runs from p through the cap to p + 2.
    note.bend(&m, a)?;
    Ok((input, target, note))
}

/// One forced measurement: alternating target and recovery projections
/// until the target pair is found in the vacuum channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub target_pair: (usize, usize),
    pub recovery_pair: (usize, usize),
    /// `e1, f1, e2, f2, ..., fn` with `e1 = fn = 0`.
    pub outcomes: Vec<Charge>,
    pub attempts: usize,
    pub trajectory_probability: f64,
    /// Every projective measurement performed, in order.
    pub events: Vec<MeasurementOutcome>,
    /// Phase of the output relative to a success on the first attempt.
    pub phase: C64,
}

impl MeasurementRecord {
    /// Outcomes of the recovery pair preceding each target measurement.
    pub fn recovery_outcomes(&self) -> impl Iterator<Item = Charge> + '_ {
        self.outcomes.iter().step_by(2).copied()
    }

    pub fn target_outcomes(&self) -> impl Iterator<Item = Charge> + '_ {
        self.outcomes.iter().skip(1).step_by(2).copied()
    }

    /// The measured outcomes only (without the initial `e1 = 0`).
    pub fn measured(&self) -> &[Charge] {
        &self.outcomes[1..]
    }
}

fn shared_leaf(a: (usize, usize), b: (usize, usize)) -> Option<usize> {
    let sa = [a.0, a.1];
    let sb = [b.0, b.1];
    let common: Vec<usize> = sa.iter().copied().filter(|x| sb.contains(x)).collect();
    match common[..] {
        [x] if a.0 != a.1 && b.0 != b.1 => Some(x),
        _ => None,
    }
}

/// Forced measurement with Born-sampled outcomes.
pub fn forced_measurement<R: Rng + ?Sized>(
    state: &StateVector,
    target: (usize, usize),
    recovery: (usize, usize),
    routing: Routing,
    rng: &mut R,
    max_attempts: usize,
) -> Result<(StateVector, MeasurementRecord)> {
    forced_measurement_with(state, target, recovery, routing, &mut Sampler(rng), max_attempts)
}

/// Forced measurement drawing outcomes from `source`.
pub fn forced_measurement_with(
    state: &StateVector,
    target: (usize, usize),
    recovery: (usize, usize),
    routing: Routing,
    source: &mut dyn OutcomeSource,
    max_attempts: usize,
) -> Result<(StateVector, MeasurementRecord)> {
    if shared_leaf(target, recovery).is_none() {
        return Err(Error::Precondition(format!(
            "pairs {target:?} and {recovery:?} must share exactly one leaf"
        )));
    }
    if max_attempts == 0 {
        return Err(Error::InvalidParameter("max_attempts must be at least 1".into()));
    }
    let vac = pair_charge_distribution(state, recovery.0, recovery.1, routing)?.prob(Charge::VACUUM);
    if vac < 1.0 - VACUUM_TOLERANCE {
        return Err(Error::Precondition(format!(
            "recovery pair {recovery:?} is not in the vacuum channel (weight {vac})"
        )));
    }
    let (reference, _) = project_pair(state, target.0, target.1, Charge::VACUUM, routing)?;

    let mut outcomes = vec![Charge::VACUUM];
    let mut events = Vec::new();
    let mut probability = 1.0;
    let mut current = state.clone();
    let mut attempts = 0;
    loop {
        attempts += 1;
        let (out, next) = measure_with(&current, target.0, target.1, routing, source)?;
        probability *= out.probability;
        outcomes.push(out.charge);
        let done = out.charge.is_vacuum();
        events.push(out);
        current = next;
        if done {
            break;
        }
        if attempts >= max_attempts {
            return Err(Error::MaxAttemptsExceeded(max_attempts));
        }
        let (out, next) = measure_with(&current, recovery.0, recovery.1, routing, source)?;
        probability *= out.probability;
        outcomes.push(out.charge);
        events.push(out);
        current = next;
    }
    let phase = if attempts == 1 { C64::new(1.0, 0.0) } else { relative_phase(&reference, &current)? };
    let record = MeasurementRecord {
        target_pair: target,
        recovery_pair: recovery,
        outcomes,
        attempts,
        trajectory_probability: probability,
        events,
        phase,
    };
    Ok((current, record))
}

/// Order in which the three forced measurements of a braid are performed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BraidDirection {
    Positive,
    Inverse,
}

impl BraidDirection {
    pub fn reversed(self) -> Self {
        match self {
            BraidDirection::Positive => BraidDirection::Inverse,
            BraidDirection::Inverse => BraidDirection::Positive,
        }
    }

    /// `(target, recovery)` pairs as positions within the quad, in execution
    /// order.
    pub fn steps(self) -> [((usize, usize), (usize, usize)); 3] {
        match self {
            BraidDirection::Positive => [((0, 1), (1, 2)), ((1, 3), (0, 1)), ((1, 2), (1, 3))],
            BraidDirection::Inverse => [((1, 3), (1, 2)), ((0, 1), (1, 3)), ((1, 2), (0, 1))],
        }
    }

    /// Generator realized by this order under `routing` on a quad of the
    /// given orientation.
    pub fn realized_sign(self, routing: Routing, mirrored: bool) -> BraidSign {
        let s = match self {
            BraidDirection::Positive => BraidSign::Positive,
            BraidDirection::Inverse => BraidSign::Negative,
        };
        // Routing lines behind the leaves reproduces the plain order; the other
        // routing is the mirror image.
        if (routing == Routing::Over) ^ mirrored {
            s.inverse()
        } else {
            s
        }
    }

    /// The order that realizes `sign`.
    pub fn for_sign(sign: BraidSign, routing: Routing, mirrored: bool) -> Self {
        match BraidDirection::Positive.realized_sign(routing, mirrored) == sign {
            true => BraidDirection::Positive,
            false => BraidDirection::Inverse,
        }
    }
}

impl fmt::Display for BraidDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BraidDirection::Positive => "positive",
            BraidDirection::Inverse => "inverse",
        })
    }
}

/// Outcome of one measurement-generated braid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraidRecord {
    pub quad: Quad,
    pub direction: BraidDirection,
    pub routing: Routing,
    pub sign: BraidSign,
    pub steps: Vec<MeasurementRecord>,
    /// Phase of the result relative to the directly braided state.
    pub extracted_phase: C64,
    /// The same for the trajectory where every step succeeds at once.
    pub base_phase: C64,
}

impl BraidRecord {
    /// Product of the per-step phases.
    pub fn trajectory_phase(&self) -> C64 {
        self.steps.iter().map(|s| s.phase).product()
    }

    pub fn outcome_string(&self) -> Vec<Charge> {
        self.steps.iter().flat_map(|s| s.measured().iter().copied()).collect()
    }

    pub fn attempts(&self) -> usize {
        self.steps.iter().map(|s| s.attempts).sum()
    }
}

/// Exchanges leaves `i < j` directly: leaf `j` is carried left to `i + 1`
/// in front of everything routed the `routing` way, exchanged with `i`, and
/// leaf `i` carried back to `j`. With a vacuum pair in between the crossing
/// side does not matter.
pub fn direct_exchange(state: &StateVector, i: usize, j: usize, sign: BraidSign, routing: Routing) -> Result<StateVector> {
    if i >= j || j >= state.num_leaves() {
        return Err(Error::OutOfRange(format!("exchange of leaves {i} and {j}")));
    }
    let front = routing.leftward_sign().inverse();
    let mut s = state.clone();
    for p in (i + 1..j).rev() {
        s = s.apply_braid(p, front)?;
    }
    s = s.apply_braid(i, sign)?;
    for p in i + 1..j {
        s = s.apply_braid(p, front.inverse())?;
    }
    Ok(s)
}

/// Leaves taking part in one measurement-generated braid, in the order
/// (computational, resource abar, resource a, computational). The four
/// leaves must be contiguous. Besides the plain left-to-right order, the
/// resource pair may straddle one of the computational leaves; when it
/// straddles the second one the quad is mirrored and the measurement order
/// realizes the opposite generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quad(pub [usize; 4]);

impl Quad {
    pub fn contiguous(p: usize) -> Self {
        Quad([p, p + 1, p + 2, p + 3])
    }

    pub fn computational(&self) -> (usize, usize) {
        (self.0[0], self.0[3])
    }

    pub fn resource(&self) -> (usize, usize) {
        (self.0[1], self.0[2])
    }

    /// Whether the geometry is supported, and if so whether it is mirrored.
    pub fn orientation(&self) -> Result<bool> {
        let [q0, q1, q2, q3] = self.0;
        let lo = *self.0.iter().min().unwrap();
        let mut sorted = self.0;
        sorted.sort_unstable();
        if sorted != [lo, lo + 1, lo + 2, lo + 3] {
            return Err(Error::Precondition(format!("quad {:?} is not four contiguous leaves", self.0)));
        }
        if q0 < q1 && q1 < q2 && q2 < q3 || q1 < q0 && q0 < q2 && q2 < q3 {
            Ok(false)
        } else if q0 < q1 && q1 < q3 && q3 < q2 {
            Ok(true)
        } else {
            Err(Error::Precondition(format!("unsupported quad geometry {:?}", self.0)))
        }
    }
}

fn check_quad(state: &StateVector, quad: Quad, routing: Routing) -> Result<bool> {
    let n = state.num_leaves();
    if quad.0.iter().any(|&q| q >= n) {
        return Err(Error::OutOfRange(format!("quad {:?} in a register of {n} leaves", quad.0)));
    }
    let mirrored = quad.orientation()?;
    let m = state.model();
    let l = state.leaves();
    let [q0, q1, q2, q3] = quad.0;
    let a = l[q0];
    if l[q3] != a || l[q1] != m.dual(a) || l[q2] != a {
        return Err(Error::Precondition(format!("leaves {:?} do not hold (a, abar, a, a)", quad.0)));
    }
    let vac = pair_charge_distribution(state, q1, q2, routing)?.prob(Charge::VACUUM);
    if vac < 1.0 - VACUUM_TOLERANCE {
        return Err(Error::Precondition(format!("resource pair {:?} is not in the vacuum channel", (q1, q2))));
    }
    Ok(mirrored)
}

/// Braids the computational leaves of `quad` using only forced
/// measurements, with outcomes drawn from `source`. The resource pair is
/// left in the vacuum channel at its original place.
pub fn measurement_braid_with(
    state: &StateVector,
    quad: Quad,
    direction: BraidDirection,
    routing: Routing,
    source: &mut dyn OutcomeSource,
    max_attempts: usize,
) -> Result<(StateVector, BraidRecord)> {
    let mirrored = check_quad(state, quad, routing)?;
    let sign = direction.realized_sign(routing, mirrored);
    let q = quad.0;
    let mut current = state.clone();
    let mut first_try = state.clone();
    let mut steps = Vec::with_capacity(3);
    for (t, r) in direction.steps() {
        let target = (q[t.0], q[t.1]);
        let recovery = (q[r.0], q[r.1]);
        first_try = project_pair(&first_try, target.0, target.1, Charge::VACUUM, routing)?.0;
        let (next, rec) = forced_measurement_with(&current, target, recovery, routing, source, max_attempts)?;
        current = next;
        steps.push(rec);
    }
    let (i, j) = quad.computational();
    let oracle = direct_exchange(state, i.min(j), i.max(j), sign, routing)?;
    let extracted_phase = relative_phase(&oracle, &current)?;
    let base_phase = relative_phase(&oracle, &first_try)?;
    let record = BraidRecord { quad, direction, routing, sign, steps, extracted_phase, base_phase };
    Ok((current, record))
}

/// [`measurement_braid_with`] with Born-sampled outcomes.
pub fn measurement_braid<R: Rng + ?Sized>(
    state: &StateVector,
    quad: Quad,
    direction: BraidDirection,
    routing: Routing,
    rng: &mut R,
    max_attempts: usize,
) -> Result<(StateVector, BraidRecord)> {
    measurement_braid_with(state, quad, direction, routing, &mut Sampler(rng), max_attempts)
}
