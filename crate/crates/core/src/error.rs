use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),

    #[error("charge index {0} is not part of the model")]
    UnknownCharge(usize),

    #[error("unknown charge label `{0}`")]
    UnknownLabel(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("model fails consistency checks: {0}")]
    InconsistentModel(String),

    #[error("model file line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0} is out of range")]
    OutOfRange(String),

    #[error("states live in different fusion spaces")]
    BasisMismatch,

    #[error("operation requires the left-canonical basis shape")]
    NonCanonicalShape,

    #[error("outcome {charge} on pair ({i}, {j}) has probability {probability:e}, below the floor")]
    ZeroProbabilityOutcome {
        i: usize,
        j: usize,
        charge: usize,
        probability: f64,
    },

    #[error("forced measurement did not succeed within {0} attempts")]
    MaxAttemptsExceeded(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("states are not equal up to a global phase (|<s1|s2>| = {0})")]
    NotPhaseEquivalent(f64),

    #[error("invalid braid word: {0}")]
    InvalidWord(String),

    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
