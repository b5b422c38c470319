use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {0} out of range (supported: 1..={max})", max = crate::state::MAX_QUBITS)]
    QubitCount(usize),

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitIndex { index: usize, n_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("gate {0} needs an angle but none was supplied")]
    MissingAngle(String),

    #[error("{what}: expected length {expected}, got {actual}")]
    Length {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("probability {0} outside [0, 1]")]
    Probability(f64),

    #[error("invalid noise configuration: {0}")]
    Noise(String),

    #[error("shot sampling requested without an rng seed")]
    MissingSeed,

    #[error("invalid circuit: {0}")]
    Circuit(String),

    #[error("finite-difference step must be positive and finite, got {0}")]
    Step(f64),

    #[error("label {label} out of range for {n_classes} classes")]
    Label { label: usize, n_classes: usize },

    #[error("empty batch")]
    EmptyBatch,

    #[error("invalid model: {0}")]
    Model(String),

    #[error("invalid training setup: {0}")]
    Training(String),

    #[error("invalid dataset: {0}")]
    Dataset(String),

    #[error("feature {0} has zero range and cannot be scaled")]
    ConstantFeature(usize),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("pairing mismatch: {0}")]
    Pairing(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn length(what: &'static str, expected: usize, actual: usize) -> Self {
        Error::Length {
            what,
            expected,
            actual,
        }
    }
}
