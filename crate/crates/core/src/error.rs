use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid scalar: {0}")]
    InvalidScalar(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("subspace is not invariant: basis vector {vector} leaves it")]
    NotInvariant { vector: String },

    #[error("malformed flag: {0}")]
    MalformedFlag(String),

    #[error("matrix is not in the algebra: {0}")]
    NotInAlgebra(String),

    #[error("subspace is not a two-sided ideal: {0}")]
    NotAnIdeal(String),

    #[error("trace-form radical needs characteristic 0 or p > {size}, got p = {characteristic}")]
    CharacteristicTooSmall { characteristic: u64, size: usize },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("generator {0:?} is not invertible")]
    NotInvertible(String),

    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),

    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),

    #[error("invalid word {0:?}")]
    InvalidWord(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("generator identity of length {length} fails on ({})", .witness.join(", "))]
    IdentityFails { length: usize, witness: Vec<String> },

    #[error("generator product ({}) is not in the ideal", .witness.join(", "))]
    LiftHypothesis { witness: Vec<String> },

    #[error("ideal is not nilpotent")]
    IdealNotNilpotent,

    #[error("group enumeration did not close within the caps ({elements} elements seen)")]
    NotFinite { elements: usize },
}
