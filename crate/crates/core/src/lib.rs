//! Simulation of measurement-only topological quantum computation: anyon
//! models, fusion-tree state vectors, projective charge measurements,
//! forced-measurement teleportation and braids generated by measurement.

pub mod compiler;
pub mod error;
pub mod fusion;
pub mod measurement;
pub mod model;
pub mod rng;
pub mod stats;
pub mod teleport;
pub mod trace;

pub use compiler::{
    build_array, compile, direct_braid_reference, embed_register, execute, execute_with, readout, ArrayLayout, BraidWord,
    ExecutionLog, Generator, Schedule, ScheduleStep,
};
pub use error::{Error, Result};
pub use fusion::{standard_basis, BraidSign, FMoveDirection, FusionSpace, FusionTree, StateVector, TreeShape};
pub use measurement::{
    pair_charge_distribution, project_pair, sample_measurement, ChargeDistribution, MeasurementOutcome, Routing,
};
pub use model::{load_builtin, AnyonModel, BuiltinModel, Charge, ConsistencyReport};
pub use rng::trial_rng;
pub use teleport::{
    expected_attempt_bound, failure_tail_probability, forced_measurement, measurement_braid, relative_phase,
    BraidDirection, BraidRecord, MeasurementRecord, Quad,
};
