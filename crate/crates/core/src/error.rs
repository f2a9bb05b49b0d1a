use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid Pauli letter {0:?}")]
    InvalidLetter(char),

    #[error("empty Pauli string")]
    EmptyString,

    #[error("qubit count must be at least 1")]
    ZeroQubits,

    #[error("X fraction {0} outside [0, 1]")]
    FractionOutOfRange(f64),

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("CNOT control and target are both qubit {0}")]
    SameControlTarget(usize),

    #[error("non-Clifford rotation encountered: {0}")]
    NonClifford(String),

    #[error("dense oracle supports at most {max} qubits, got {n}")]
    TooManyQubits { n: usize, max: usize },

    #[error("angle vector has length {actual}, expected {expected}")]
    AngleLength { expected: usize, actual: usize },

    #[error("quarter-turn index {0} outside 0..4")]
    InvalidQuarterTurn(u8),

    #[error("feature level {0} outside 0..4")]
    InvalidLevel(u8),

    #[error("enumeration of 4^{exponent} angle vectors exceeds the 2^24 budget")]
    BudgetExceeded { exponent: usize },

    #[error("cannot fit exponent: {0}")]
    Unfittable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("surrogate needs at least 2 observations, got {0}")]
    TooFewObservations(usize),

    #[error("candidate pool is empty after removing evaluated points")]
    EmptyPool,

    #[error("loss evaluation failed for angles {angles:?}: {reason}")]
    Evaluation { angles: Vec<u8>, reason: String },

    #[error("empty trace")]
    EmptyTrace,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}
