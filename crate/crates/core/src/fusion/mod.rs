//! Fusion-tree bases and states of anyon registers.

mod dump;
mod state;
mod tree;

pub use dump::{StateDump, StateDumpRow};
pub use state::{BraidSign, DiagramIsotopyNote, FMoveDirection, StateVector, NORM_TOLERANCE};
pub use tree::{standard_basis, FusionSpace, FusionTree, TreeShape};
