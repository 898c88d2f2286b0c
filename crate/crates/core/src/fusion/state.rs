use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::tree::{FusionSpace, FusionTree, TreeShape};
use crate::error::{Error, Result};
use crate::model::{AnyonModel, Charge};

/// Largest norm drift tolerated before an operation is considered broken.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Direction of an F-move on one internal slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FMoveDirection {
    /// Left chain to "pair first" at the slot.
    Forward,
    /// Back to the left chain.
    Backward,
}

/// Over- or under-crossing of a braid generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BraidSign {
    Positive,
    Negative,
}

impl BraidSign {
    pub fn inverse(self) -> Self {
        match self {
            BraidSign::Positive => BraidSign::Negative,
            BraidSign::Negative => BraidSign::Positive,
        }
    }

    pub fn from_i32(s: i32) -> Result<Self> {
        match s {
            1 => Ok(BraidSign::Positive),
            -1 => Ok(BraidSign::Negative),
            _ => Err(Error::Precondition(format!("braid sign must be +1 or -1, got {s}"))),
        }
    }
}

/// Phase bookkeeping for bent charge lines: every cup or cap closed on a
/// charge `a` contributes `kappa_a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramIsotopyNote {
    pub factor: C64,
    pub bends: u32,
}

impl Default for DiagramIsotopyNote {
    fn default() -> Self {
        DiagramIsotopyNote { factor: C64::new(1.0, 0.0), bends: 0 }
    }
}

impl DiagramIsotopyNote {
    /// Records one bend of the line carrying `a`.
    pub fn bend(&mut self, model: &AnyonModel, a: Charge) -> Result<()> {
        self.factor *= model.kappa(a)?;
        self.bends += 1;
        Ok(())
    }
}

/// Normalized amplitudes over an enumerated fusion basis. Values are
/// immutable: every operation returns a new state.
#[derive(Clone, Debug)]
pub struct StateVector {
    space: Arc<FusionSpace>,
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes over `space`, rescaling them to unit norm.
    pub fn from_amplitudes(space: Arc<FusionSpace>, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != space.dim() {
            return Err(Error::Precondition(format!(
                "{} amplitudes for a {}-dimensional space",
                amps.len(),
                space.dim()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::Precondition("cannot normalize a zero vector".into()));
        }
        Ok(StateVector { space, amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    /// Unit vector on basis tree `index` of the left-chain basis.
    pub fn basis_state(model: Arc<AnyonModel>, leaves: &[Charge], total: Charge, index: usize) -> Result<Self> {
        let space = Arc::new(FusionSpace::new(model, leaves, total, TreeShape::LeftChain)?);
        if index >= space.dim() {
            return Err(Error::OutOfRange(format!("basis index {index} (dimension {})", space.dim())));
        }
        let mut amps = vec![C64::new(0.0, 0.0); space.dim()];
        amps[index] = C64::new(1.0, 0.0);
        Ok(StateVector { space, amps })
    }

    /// The zero-anyon state (total charge vacuum).
    pub fn vacuum(model: Arc<AnyonModel>) -> Self {
        let space = Arc::new(FusionSpace::new(model, &[], Charge::VACUUM, TreeShape::LeftChain).unwrap());
        StateVector { space, amps: vec![C64::new(1.0, 0.0)] }
    }

    /// Haar-random state (normalized complex Gaussian amplitudes).
    pub fn random<R: Rng + ?Sized>(
        model: Arc<AnyonModel>,
        leaves: &[Charge],
        total: Charge,
        rng: &mut R,
    ) -> Result<Self> {
        let space = Arc::new(FusionSpace::new(model, leaves, total, TreeShape::LeftChain)?);
        if space.dim() == 0 {
            return Err(Error::Precondition("total charge is unreachable from these leaves".into()));
        }
        let amps = (0..space.dim())
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::from_amplitudes(space, amps)
    }

    /// `|a, abar; 0>` on two leaves.
    pub fn entangled_pair(model: Arc<AnyonModel>, a: Charge) -> Result<Self> {
        model.check(a)?;
        let ad = model.dual(a);
        Self::basis_state(model, &[a, ad], Charge::VACUUM, 0)
    }

    pub fn space(&self) -> &Arc<FusionSpace> {
        &self.space
    }

    pub fn model(&self) -> &Arc<AnyonModel> {
        self.space.model()
    }

    pub fn leaves(&self) -> &[Charge] {
        self.space.leaves()
    }

    pub fn num_leaves(&self) -> usize {
        self.space.leaves().len()
    }

    pub fn total(&self) -> Charge {
        self.space.total()
    }

    pub fn shape(&self) -> TreeShape {
        self.space.shape()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn trees(&self) -> &[FusionTree] {
        self.space.trees()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if !self.space.same_as(&other.space) {
            return Err(Error::BasisMismatch);
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Multiplies every amplitude by `phase`.
    pub fn scaled(&self, phase: C64) -> StateVector {
        StateVector { space: self.space.clone(), amps: self.amps.iter().map(|a| a * phase).collect() }
    }

    fn require_chain(&self) -> Result<()> {
        if self.shape() != TreeShape::LeftChain {
            return Err(Error::NonCanonicalShape);
        }
        Ok(())
    }

    /// Rewrites internal slot `slot` through `kernel(prev, old, next)`, which
    /// lists `(new, coefficient)` pairs. Leaves may be replaced.
    pub(crate) fn map_slot<K>(&self, slot: usize, leaves: &[Charge], shape: TreeShape, kernel: K) -> Result<Unnormalized>
    where
        K: Fn(usize, usize, usize) -> Vec<(usize, C64)>,
    {
        let model = self.model().clone();
        let space = Arc::new(FusionSpace::new(model, leaves, self.total(), shape)?);
        let mut out = vec![C64::new(0.0, 0.0); space.dim()];
        let n = self.num_leaves();
        let mut key = Vec::with_capacity(n.saturating_sub(2));
        for (tree, &amp) in self.trees().iter().zip(&self.amps) {
            if amp == C64::new(0.0, 0.0) {
                continue;
            }
            let prev = if slot == 1 { tree.leaves[0] } else { tree.internals[slot - 2] };
            let next = if slot + 1 == n - 1 { tree.total } else { tree.internals[slot] };
            let old = tree.internals[slot - 1];
            for (new, coeff) in kernel(prev.0, old.0, next.0) {
                key.clear();
                key.extend_from_slice(&tree.internals);
                key[slot - 1] = Charge(new);
                if let Some(pos) = space.position(&key) {
                    out[pos] += amp * coeff;
                }
            }
        }
        Ok(Unnormalized { space, amps: out })
    }

    /// One F-move on internal slot `slot` (`1 <= slot <= n - 2`). Forward
    /// takes the left chain to the basis where leaves `slot` and `slot + 1`
    /// fuse first; backward undoes it.
    pub fn apply_f_move(&self, slot: usize, direction: FMoveDirection) -> Result<StateVector> {
        let n = self.num_leaves();
        if n < 3 || slot == 0 || slot + 2 > n {
            return Err(Error::OutOfRange(format!("F-move slot {slot} for {n} leaves")));
        }
        let model = self.model().clone();
        let (a, b) = (self.leaves()[slot].0, self.leaves()[slot + 1].0);
        let leaves = self.leaves().to_vec();
        let out = match direction {
            FMoveDirection::Forward => {
                self.require_chain()?;
                self.map_slot(slot, &leaves, TreeShape::Reassociated(slot), |prev, e, next| {
                    let Some(blk) = model.f_block_idx(prev, a, b, next) else { return vec![] };
                    let Some(r) = blk.rows.iter().position(|&x| x == e) else { return vec![] };
                    blk.cols.iter().enumerate().map(|(c, &f)| (f, blk.at(r, c))).collect()
                })?
            }
            FMoveDirection::Backward => {
                if self.shape() != TreeShape::Reassociated(slot) {
                    return Err(Error::Precondition(format!("state is not reassociated at slot {slot}")));
                }
                self.map_slot(slot, &leaves, TreeShape::LeftChain, |prev, f, next| {
                    let Some(blk) = model.f_block_idx(prev, a, b, next) else { return vec![] };
                    let Some(c) = blk.cols.iter().position(|&x| x == f) else { return vec![] };
                    blk.rows.iter().enumerate().map(|(r, &e)| (e, blk.at(r, c).conj())).collect()
                })?
            }
        };
        Ok(out.into_state_unchecked())
    }

    /// Exchanges leaves `i` and `i + 1`. The positive generator maps
    /// `|a, b; c>` to `R^{ab}_c |b, a; c>`; the negative one is its inverse.
    pub fn apply_braid(&self, i: usize, sign: BraidSign) -> Result<StateVector> {
        self.require_chain()?;
        let n = self.num_leaves();
        if i + 1 >= n {
            return Err(Error::OutOfRange(format!("braid position {i} for {n} leaves")));
        }
        let model = self.model().clone();
        let (a, b) = (self.leaves()[i].0, self.leaves()[i + 1].0);
        let mut leaves = self.leaves().to_vec();
        leaves.swap(i, i + 1);
        let phase = |c: usize| match sign {
            BraidSign::Positive => model.r_idx(a, b, c),
            BraidSign::Negative => model.r_idx(b, a, c).conj(),
        };
        if i == 0 {
            let space = Arc::new(FusionSpace::new(model.clone(), &leaves, self.total(), TreeShape::LeftChain)?);
            let mut out = vec![C64::new(0.0, 0.0); space.dim()];
            for (tree, &amp) in self.trees().iter().zip(&self.amps) {
                let c = tree.chain(1);
                let pos = space.position(&tree.internals).expect("channel is symmetric under exchange");
                out[pos] += amp * phase(c.0);
            }
            return Ok(StateVector { space, amps: out });
        }
        let out = self.map_slot(i, &leaves, TreeShape::LeftChain, |prev, old, next| {
            let (Some(fwd), Some(back)) = (model.f_block_idx(prev, a, b, next), model.f_block_idx(prev, b, a, next))
            else {
                return vec![];
            };
            let Some(r) = fwd.rows.iter().position(|&x| x == old) else { return vec![] };
            back.rows
                .iter()
                .enumerate()
                .map(|(r2, &new)| {
                    let mut s = C64::new(0.0, 0.0);
                    for (c, &f) in fwd.cols.iter().enumerate() {
                        if let Some(c2) = back.cols.iter().position(|&x| x == f) {
                            s += fwd.at(r, c) * phase(f) * back.at(r2, c2).conj();
                        }
                    }
                    (new, s)
                })
                .collect()
        })?;
        Ok(out.into_state_unchecked())
    }

    /// Inserts the pair `|a, abar; 0>` so that it occupies leaves `position`
    /// and `position + 1` (`0 <= position <= n`).
    pub fn attach_pair(&self, position: usize, a: Charge) -> Result<StateVector> {
        self.require_chain()?;
        let model = self.model().clone();
        model.check(a)?;
        let n = self.num_leaves();
        if position > n {
            return Err(Error::OutOfRange(format!("pair position {position} for {n} leaves")));
        }
        let ad = model.dual(a);
        let mut leaves = self.leaves().to_vec();
        leaves.splice(position..position, [a, ad]);
        let space = Arc::new(FusionSpace::new(model.clone(), &leaves, self.total(), TreeShape::LeftChain)?);
        let mut out = vec![C64::new(0.0, 0.0); space.dim()];
        for (tree, &amp) in self.trees().iter().zip(&self.amps) {
            let chain = full_chain(tree);
            if position == 0 {
                let mut new_chain = vec![a, Charge::VACUUM];
                new_chain.extend_from_slice(&chain);
                let pos = space.position(internals_of(&new_chain)).expect("vacuum pair is admissible");
                out[pos] += amp;
                continue;
            }
            let c = chain[position - 1];
            for &e in model.fuse_idx(c.0, a.0) {
                let coeff = model.f_idx(c.0, a.0, ad.0, c.0, e, 0).conj();
                if coeff == C64::new(0.0, 0.0) {
                    continue;
                }
                let mut new_chain = chain[..position].to_vec();
                new_chain.push(Charge(e));
                new_chain.extend_from_slice(&chain[position - 1..]);
                if let Some(pos) = space.position(internals_of(&new_chain)) {
                    out[pos] += amp * coeff;
                }
            }
        }
        Ok(StateVector { space, amps: out })
    }

    /// Removes leaves `position` and `position + 1`, which must be a
    /// particle-antiparticle pair in the vacuum channel. Inverse of
    /// [`StateVector::attach_pair`].
    pub fn detach_pair(&self, position: usize) -> Result<StateVector> {
        self.require_chain()?;
        let model = self.model().clone();
        let n = self.num_leaves();
        if position + 1 >= n {
            return Err(Error::OutOfRange(format!("pair position {position} for {n} leaves")));
        }
        let (a, ad) = (self.leaves()[position], self.leaves()[position + 1]);
        if model.dual(a) != ad {
            return Err(Error::Precondition("leaves are not a particle-antiparticle pair".into()));
        }
        let mut leaves = self.leaves().to_vec();
        leaves.drain(position..position + 2);
        let space = Arc::new(FusionSpace::new(model.clone(), &leaves, self.total(), TreeShape::LeftChain)?);
        let mut out = vec![C64::new(0.0, 0.0); space.dim()];
        for (tree, &amp) in self.trees().iter().zip(&self.amps) {
            let chain = full_chain(tree);
            let (coeff, old_chain) = if position == 0 {
                if !chain[1].is_vacuum() {
                    continue;
                }
                (C64::new(1.0, 0.0), chain[2..].to_vec())
            } else {
                let c = chain[position - 1];
                if chain[position + 1] != c {
                    continue;
                }
                let e = chain[position];
                let mut old = chain[..position].to_vec();
                old.extend_from_slice(&chain[position + 2..]);
                (model.f_idx(c.0, a.0, ad.0, c.0, e.0, 0), old)
            };
            if let Some(pos) = space.position(internals_of(&old_chain)) {
                out[pos] += amp * coeff;
            }
        }
        let kept: f64 = out.iter().map(|x| x.norm_sqr()).sum();
        if (kept - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Precondition(format!(
                "pair at {position} is not in the vacuum channel (weight {kept})"
            )));
        }
        StateVector::from_amplitudes(space, out)
    }
}

/// Result of a linear map before renormalization.
pub(crate) struct Unnormalized {
    pub space: Arc<FusionSpace>,
    pub amps: Vec<C64>,
}

impl Unnormalized {
    /// For unitary maps, where the norm is preserved already.
    pub fn into_state_unchecked(self) -> StateVector {
        StateVector { space: self.space, amps: self.amps }
    }
}

impl StateVector {
    pub(crate) fn from_parts(space: Arc<FusionSpace>, amps: Vec<C64>) -> Unnormalized {
        Unnormalized { space, amps }
    }
}

/// Running charges `c_0 .. c_{n-1}` of a left-chain tree.
fn full_chain(tree: &FusionTree) -> Vec<Charge> {
    (0..tree.leaves.len()).map(|i| tree.chain(i)).collect()
}

/// Internal labels of a chain: everything except the first leaf and the total.
fn internals_of(chain: &[Charge]) -> &[Charge] {
    if chain.len() <= 2 {
        &[]
    } else {
        &chain[1..chain.len() - 1]
    }
}
