use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid cyclic quotient type: {0}")]
    InvalidType(String),
    #[error("residue 0 is not allowed here: {0}")]
    ZeroResidue(String),
    #[error("not a terminal 3-dimensional type: {0}")]
    NotTerminal(String),
    #[error("noncanonical input: {0}")]
    Noncanonical(String),
    #[error("quasismoothness violated: {0}")]
    QuasismoothnessViolated(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("degree {degree} not transportable through common factor {factor}")]
    DegreeNotTransportable { degree: u64, factor: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("ill-formed exceptional space P({0})")]
    IllFormedExceptional(String),
    #[error("non-isolated singular locus: {0}")]
    NonIsolated(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
