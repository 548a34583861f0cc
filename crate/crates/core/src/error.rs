use thiserror::Error;

/// Errors produced by mesh construction, set evaluation and the constructions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("markers too close for this level")]
    MarkersTooClose,

    #[error("solidity undefined for trivial sets")]
    TrivialSet,

    #[error("ν defined on solid sets only")]
    NotSolid,

    #[error("set belongs to a different mesh")]
    MeshMismatch,

    #[error("field has {got} values but the mesh has {expected} vertices")]
    FieldLength { expected: usize, got: usize },

    #[error("field value at vertex {0} is not finite")]
    NonFiniteValue(usize),

    #[error("expected a {expected} set, got a {got} set")]
    WrongKind {
        expected: &'static str,
        got: &'static str,
    },

    #[error("simplicity violation: {0}")]
    SimplicityViolation(String),

    #[error("internal invariant violation: {0}")]
    InvariantViolation(String),

    #[error("field too coarse for median at this refinement")]
    MedianNotFound,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
