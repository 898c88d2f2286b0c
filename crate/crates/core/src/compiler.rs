//! Braid words on a quasi-one-dimensional array of stationary anyons,
//! compiled to forced-measurement schedules.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{BraidSign, StateVector};
use crate::measurement::{measure_with, pair_charge_distribution, MeasurementOutcome, OutcomeSource, Routing, Sampler};
use crate::model::{AnyonModel, Charge};
use crate::teleport::{direct_exchange, measurement_braid_with, BraidDirection, BraidRecord, Quad};

/// Resource pairs whose vacuum weight drifts further than this after a step
/// count as not restored.
pub const RESTORATION_TOLERANCE: f64 = 1e-10;

/// One braid generator on computational strands (0-based: `index` exchanges
/// strands `index` and `index + 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub index: usize,
    pub sign: BraidSign,
}

impl Generator {
    pub fn inverse(self) -> Self {
        Generator { index: self.index, sign: self.sign.inverse() }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.index + 1)?;
        if self.sign == BraidSign::Negative {
            f.write_str("'")?;
        }
        Ok(())
    }
}

/// A braid word, written as whitespace-separated tokens `s1 s2' s1`
/// (1-based strands, apostrophe for the inverse).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord(pub Vec<Generator>);

impl BraidWord {
    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    /// Highest strand index touched plus one (0 for the empty word).
    pub fn strands(&self) -> usize {
        self.0.iter().map(|g| g.index + 2).max().unwrap_or(0)
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(|tok| {
                let bad = || Error::InvalidWord(format!("`{tok}` (expected s<k> or s<k>')"));
                let body = tok.strip_prefix('s').ok_or_else(bad)?;
                let (num, sign) = match body.strip_suffix('\'') {
                    Some(n) => (n, BraidSign::Negative),
                    None => (body, BraidSign::Positive),
                };
                let k: usize = num.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(Error::InvalidWord(format!("`{tok}`: strands are numbered from 1")));
                }
                Ok(Generator { index: k - 1, sign })
            })
            .collect::<Result<Vec<_>>>()
            .map(BraidWord)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Where computational and resource anyons sit in the register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrayLayout {
    pub model: String,
    pub charge: Charge,
    /// Leaf of every computational anyon, left to right.
    pub computational: Vec<usize>,
    /// Resource pairs as `(abar, a)` leaves.
    pub resources: Vec<(usize, usize)>,
    /// The quad used by generator `i`.
    pub quads: Vec<Quad>,
    pub num_leaves: usize,
    /// One resource anyon per gap, pairs straddling computational anyons.
    pub self_dual_economy: bool,
    pub routing: Routing,
}

impl ArrayLayout {
    pub fn num_computational(&self) -> usize {
        self.computational.len()
    }

    fn check_word(&self, word: &BraidWord) -> Result<()> {
        for g in word.generators() {
            if g.index + 1 >= self.computational.len() {
                return Err(Error::OutOfRange(format!(
                    "generator {g} on {} computational anyons",
                    self.computational.len()
                )));
            }
        }
        Ok(())
    }
}

/// Builds the array and its initial state: computational anyons created in
/// neighbouring vacuum pairs (the last one alone when their number is odd),
/// resource pairs in the vacuum channel.
pub fn build_array(
    model: Arc<AnyonModel>,
    a: Charge,
    n_computational: usize,
    self_dual_economy: bool,
    routing: Routing,
) -> Result<(ArrayLayout, StateVector)> {
    model.check(a)?;
    if n_computational < 2 {
        return Err(Error::Precondition("an array needs at least two computational anyons".into()));
    }
    let n = n_computational;
    let mut register = if n % 2 == 1 {
        StateVector::basis_state(model.clone(), &[a], a, 0)?
    } else {
        StateVector::vacuum(model.clone())
    };
    for k in 0..n / 2 {
        register = register.attach_pair(2 * k, a)?;
    }
    embed_register(&register, self_dual_economy, routing)
}

/// Places the computational anyons of `register` (all of one charge) into
/// an array, inserting the resource pairs in the vacuum channel.
pub fn embed_register(
    register: &StateVector,
    self_dual_economy: bool,
    routing: Routing,
) -> Result<(ArrayLayout, StateVector)> {
    let model = register.model().clone();
    let n = register.num_leaves();
    if n < 2 {
        return Err(Error::Precondition("an array needs at least two computational anyons".into()));
    }
    let a = register.leaves()[0];
    if a.is_vacuum() {
        return Err(Error::Precondition("computational anyons must carry a nontrivial charge".into()));
    }
    if !model.is_self_dual(a) {
        return Err(Error::Precondition(format!(
            "computational charge {} is not self-dual; vacuum-pair initialization needs a = abar",
            model.label(a)
        )));
    }
    if register.leaves().iter().any(|&l| l != a) {
        return Err(Error::Precondition("computational anyons must all carry the same charge".into()));
    }
    let mut state = register.clone();
    let ad = model.dual(a);
    let gaps = n - 1;
    let layout = if !self_dual_economy {
        for g in (0..gaps).rev() {
            state = state.attach_pair(g + 1, ad)?;
        }
        ArrayLayout {
            model: model.name().to_string(),
            charge: a,
            computational: (0..n).map(|i| 3 * i).collect(),
            resources: (0..gaps).map(|g| (3 * g + 1, 3 * g + 2)).collect(),
            quads: (0..gaps).map(|g| Quad::contiguous(3 * g)).collect(),
            num_leaves: 3 * n - 2,
            self_dual_economy,
            routing,
        }
    } else {
        // Pair g/2 straddles computational anyon g + 1, its partner landing
        // in the next gap (or past the last anyon). The partner is carried
        // across the way measurement lines are routed, so the pair reads as
        // vacuum under that routing.
        let across = routing.leftward_sign().inverse();
        for g in (0..gaps).step_by(2).collect::<Vec<_>>().into_iter().rev() {
            state = state.attach_pair(g + 1, a)?;
            state = state.apply_braid(g + 2, across)?;
        }
        let num_leaves = state.num_leaves();
        let quads = (0..gaps)
            .map(|g| {
                if g % 2 == 0 {
                    Quad([2 * g, 2 * g + 1, 2 * g + 3, 2 * g + 2])
                } else {
                    Quad([2 * g, 2 * g - 1, 2 * g + 1, 2 * g + 2])
                }
            })
            .collect();
        ArrayLayout {
            model: model.name().to_string(),
            charge: a,
            computational: (0..n).map(|i| 2 * i).collect(),
            resources: (0..gaps).step_by(2).map(|g| (2 * g + 1, 2 * g + 3)).collect(),
            quads,
            num_leaves,
            self_dual_economy,
            routing,
        }
    };
    debug_assert_eq!(layout.num_leaves, state.num_leaves());
    Ok((layout, state))
}

/// One forced measurement of a compiled braid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedStep {
    pub target: (usize, usize),
    pub recovery: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScheduleStep {
    /// Three forced measurements realizing one generator.
    Braid {
        generator: Generator,
        quad: Quad,
        direction: BraidDirection,
        forced: Vec<ForcedStep>,
    },
    /// A plain projective measurement of a pair.
    Readout { pair: (usize, usize) },
}

/// Measurement program for one layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub model: String,
    pub charge: Charge,
    pub computational: usize,
    pub self_dual_economy: bool,
    pub routing: Routing,
    pub steps: Vec<ScheduleStep>,
}

impl Schedule {
    pub fn forced_count(&self) -> usize {
        self.steps
            .iter()
            .map(|s| match s {
                ScheduleStep::Braid { forced, .. } => forced.len(),
                ScheduleStep::Readout { .. } => 0,
            })
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))
    }

    fn matches(&self, layout: &ArrayLayout) -> bool {
        self.charge == layout.charge
            && self.computational == layout.num_computational()
            && self.self_dual_economy == layout.self_dual_economy
            && self.routing == layout.routing
    }
}

fn braid_step(layout: &ArrayLayout, g: Generator) -> Result<ScheduleStep> {
    let quad = layout.quads[g.index];
    let direction = BraidDirection::for_sign(g.sign, layout.routing, quad.orientation()?);
    let q = quad.0;
    let forced = direction
        .steps()
        .iter()
        .map(|&(t, r)| ForcedStep { target: (q[t.0], q[t.1]), recovery: (q[r.0], q[r.1]) })
        .collect();
    Ok(ScheduleStep::Braid { generator: g, quad, direction, forced })
}

/// Expands every generator into the three forced measurements on its quad.
pub fn compile(word: &BraidWord, layout: &ArrayLayout) -> Result<Schedule> {
    layout.check_word(word)?;
    let steps = word.generators().iter().map(|&g| braid_step(layout, g)).collect::<Result<Vec<_>>>()?;
    Ok(Schedule {
        model: layout.model.clone(),
        charge: layout.charge,
        computational: layout.num_computational(),
        self_dual_economy: layout.self_dual_economy,
        routing: layout.routing,
        steps,
    })
}

/// Everything that happened while executing a schedule.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExecutionLog {
    pub braids: Vec<BraidRecord>,
    pub readouts: Vec<MeasurementOutcome>,
}

fn check_resources(layout: &ArrayLayout, state: &StateVector) -> Result<()> {
    for &(i, j) in &layout.resources {
        let vac = pair_charge_distribution(state, i, j, layout.routing)?.prob(Charge::VACUUM);
        if (vac - 1.0).abs() > RESTORATION_TOLERANCE {
            return Err(Error::Precondition(format!("resource pair ({i}, {j}) not restored: vacuum weight {vac}")));
        }
    }
    Ok(())
}

/// Runs a schedule with outcomes drawn from `source`. Every resource pair is
/// checked to be back in the vacuum channel after every braid.
pub fn execute_with(
    schedule: &Schedule,
    layout: &ArrayLayout,
    state: &StateVector,
    source: &mut dyn OutcomeSource,
    max_attempts: usize,
) -> Result<(StateVector, ExecutionLog)> {
    if !schedule.matches(layout) || state.num_leaves() != layout.num_leaves {
        return Err(Error::Precondition("schedule was compiled for a different layout".into()));
    }
    let mut current = state.clone();
    let mut log = ExecutionLog::default();
    for step in &schedule.steps {
        match step {
            ScheduleStep::Braid { generator, .. } => {
                if generator.index + 1 >= layout.num_computational() || braid_step(layout, *generator)? != *step {
                    return Err(Error::Precondition(format!("schedule step for {generator} does not match the layout")));
                }
                let ScheduleStep::Braid { quad, direction, .. } = step else { unreachable!() };
                let (next, rec) =
                    measurement_braid_with(&current, *quad, *direction, layout.routing, source, max_attempts)?;
                check_resources(layout, &next)?;
                current = next;
                log.braids.push(rec);
            }
            ScheduleStep::Readout { pair } => {
                let (out, next) = measure_with(&current, pair.0, pair.1, layout.routing, source)?;
                current = next;
                log.readouts.push(out);
            }
        }
    }
    Ok((current, log))
}

/// [`execute_with`] with Born-sampled outcomes.
pub fn execute<R: Rng + ?Sized>(
    schedule: &Schedule,
    layout: &ArrayLayout,
    state: &StateVector,
    rng: &mut R,
    max_attempts: usize,
) -> Result<(StateVector, ExecutionLog)> {
    execute_with(schedule, layout, state, &mut Sampler(rng), max_attempts)
}

/// Applies the word by exchanging computational anyons directly.
pub fn direct_braid_reference(word: &BraidWord, layout: &ArrayLayout, state: &StateVector) -> Result<StateVector> {
    layout.check_word(word)?;
    let mut s = state.clone();
    for g in word.generators() {
        let i = layout.computational[g.index];
        let j = layout.computational[g.index + 1];
        s = direct_exchange(&s, i, j, g.sign, layout.routing)?;
    }
    Ok(s)
}

/// Measures the charge of a pair of leaves.
pub fn readout<R: Rng + ?Sized>(
    state: &StateVector,
    pair: (usize, usize),
    routing: Routing,
    rng: &mut R,
) -> Result<(MeasurementOutcome, StateVector)> {
    measure_with(state, pair.0, pair.1, routing, &mut Sampler(rng))
}
