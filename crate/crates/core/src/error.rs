use thiserror::Error;

use crate::circuit::{ParseError, SourceLoc};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state is not normalized: norm^2 = {norm_sqr}")]
    Normalization { norm_sqr: f64 },
    #[error("qubit index {index} out of range for {num_qubits} qubit(s)")]
    QubitIndex { index: usize, num_qubits: usize },
    #[error("gate acts on qubit {0} twice")]
    DuplicateQubit(usize),
    #[error("projection onto outcome {outcome} of qubit {qubit} has vanishing norm")]
    Projection { qubit: usize, outcome: u8 },
    #[error("invalid observable: {0}")]
    Observable(String),
    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },
    #[error("unsupported size {size} (allowed {min}..={max})")]
    Size { size: usize, min: usize, max: usize },
    #[error("non-Clifford operation: {what}")]
    NonCliffordGate { what: String, witnesses: Vec<SourceLoc> },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid LHV model: {0}")]
    Model(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
