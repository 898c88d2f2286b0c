use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AnyonModel, Charge};

/// Which association the internal labels of a basis describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TreeShape {
    /// `((...(l0 l1) l2) ...) l_{n-1}`: internal slot `i` holds the charge of
    /// leaves `0..=i`.
    LeftChain,
    /// As `LeftChain`, except slot `i` holds the joint charge of leaves `i`
    /// and `i + 1`, which fuse before joining the chain.
    Reassociated(usize),
}

/// One basis label of an n-anyon fusion space.
///
/// `internals` has length `n - 2` (empty for one or two leaves). Internal
/// slot `s` is stored at `internals[s - 1]` for `s in 1..=n-2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FusionTree {
    pub leaves: Vec<Charge>,
    pub internals: Vec<Charge>,
    pub total: Charge,
}

impl FusionTree {
    /// Charge of the left chain after leaf `i` (leaf 0 itself for `i = 0`,
    /// the total for the last leaf). Only meaningful for `LeftChain` trees.
    pub fn chain(&self, i: usize) -> Charge {
        let n = self.leaves.len();
        if i == 0 {
            self.leaves[0]
        } else if i + 1 == n {
            self.total
        } else {
            self.internals[i - 1]
        }
    }
}

/// An enumerated basis: every admissible tree for fixed leaves, total and
/// shape, in canonical order.
#[derive(Debug)]
pub struct FusionSpace {
    model: Arc<AnyonModel>,
    leaves: Vec<Charge>,
    total: Charge,
    shape: TreeShape,
    trees: Vec<FusionTree>,
    index: HashMap<Vec<Charge>, usize>,
}

impl FusionSpace {
    pub fn new(model: Arc<AnyonModel>, leaves: &[Charge], total: Charge, shape: TreeShape) -> Result<Self> {
        for &c in leaves.iter().chain(std::iter::once(&total)) {
            model.check(c)?;
        }
        let n = leaves.len();
        if let TreeShape::Reassociated(s) = shape {
            if n < 3 || s == 0 || s + 2 > n {
                return Err(Error::OutOfRange(format!("reassociation slot {s} for {n} leaves")));
            }
        }
        let trees = enumerate(&model, leaves, total, shape);
        let index = trees
            .iter()
            .enumerate()
            .map(|(i, t)| (t.internals.clone(), i))
            .collect();
        Ok(FusionSpace {
            model,
            leaves: leaves.to_vec(),
            total,
            shape,
            trees,
            index,
        })
    }

    pub fn model(&self) -> &Arc<AnyonModel> {
        &self.model
    }

    pub fn leaves(&self) -> &[Charge] {
        &self.leaves
    }

    pub fn total(&self) -> Charge {
        self.total
    }

    pub fn shape(&self) -> TreeShape {
        self.shape
    }

    pub fn trees(&self) -> &[FusionTree] {
        &self.trees
    }

    pub fn dim(&self) -> usize {
        self.trees.len()
    }

    pub fn position(&self, internals: &[Charge]) -> Option<usize> {
        self.index.get(internals).copied()
    }

    /// Same model, leaves, total and shape.
    pub fn same_as(&self, other: &FusionSpace) -> bool {
        Arc::ptr_eq(&self.model, &other.model)
            && self.leaves == other.leaves
            && self.total == other.total
            && self.shape == other.shape
    }
}

/// All admissible left-chain trees for `leaves` fusing to `total`, in
/// lexicographic order of their internal labels. Empty when `total` is
/// unreachable.
pub fn standard_basis(model: &AnyonModel, leaves: &[Charge], total: Charge) -> Result<Vec<FusionTree>> {
    if leaves.is_empty() {
        return Err(Error::Precondition("a fusion tree needs at least one leaf".into()));
    }
    for &c in leaves.iter().chain(std::iter::once(&total)) {
        model.check(c)?;
    }
    Ok(enumerate(model, leaves, total, TreeShape::LeftChain))
}

fn enumerate(model: &AnyonModel, leaves: &[Charge], total: Charge, shape: TreeShape) -> Vec<FusionTree> {
    let n = leaves.len();
    let mut out = Vec::new();
    if n == 0 {
        if total.is_vacuum() {
            out.push(FusionTree { leaves: vec![], internals: vec![], total });
        }
        return out;
    }
    if n == 1 {
        if leaves[0] == total {
            out.push(FusionTree { leaves: leaves.to_vec(), internals: vec![], total });
        }
        return out;
    }
    // chain[i] is the running charge after leaf i.
    let mut internals = Vec::with_capacity(n - 2);
    walk(model, leaves, total, shape, 1, leaves[0].0, &mut internals, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    model: &AnyonModel,
    leaves: &[Charge],
    total: Charge,
    shape: TreeShape,
    i: usize,
    prev: usize,
    internals: &mut Vec<Charge>,
    out: &mut Vec<FusionTree>,
) {
    let n = leaves.len();
    if i + 1 == n {
        if model.fuses_idx(prev, leaves[i].0, total.0) {
            out.push(FusionTree { leaves: leaves.to_vec(), internals: internals.clone(), total });
        }
        return;
    }
    match shape {
        TreeShape::Reassociated(s) if s == i => {
            // Slot i holds the pair charge of leaves i and i+1; the chain
            // resumes after leaf i+1.
            for &f in model.fuse_idx(leaves[i].0, leaves[i + 1].0) {
                for &next in model.fuse_idx(prev, f) {
                    if i + 2 == n {
                        if next != total.0 {
                            continue;
                        }
                        internals.push(Charge(f));
                        out.push(FusionTree { leaves: leaves.to_vec(), internals: internals.clone(), total });
                        internals.pop();
                    } else {
                        internals.push(Charge(f));
                        internals.push(Charge(next));
                        walk(model, leaves, total, shape, i + 2, next, internals, out);
                        internals.pop();
                        internals.pop();
                    }
                }
            }
        }
        _ => {
            for &next in model.fuse_idx(prev, leaves[i].0) {
                internals.push(Charge(next));
                walk(model, leaves, total, shape, i + 1, next, internals, out);
                internals.pop();
            }
        }
    }
}
