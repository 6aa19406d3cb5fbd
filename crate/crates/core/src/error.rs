use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree is not balanced")]
    Unbalanced,

    #[error("degree contains a zero vector")]
    ZeroVector,

    #[error("sequence has {0} vectors, at least 2 required")]
    TooShort(usize),

    #[error("inconsistent V-type: {0}")]
    InconsistentVType(String),

    #[error("collinear vectors in vertex weight")]
    Collinear,

    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,

    #[error("configuration lies on a wall: {0}")]
    Wall(String),

    #[error("resample budget of {0} attempts exhausted")]
    ResampleBudget(usize),

    #[error("projection is not generic: {0}")]
    NonGenericProjection(String),

    #[error("nontrivial automorphism detected on a contributing curve")]
    NontrivialAutomorphism,

    #[error("labeled total is not divisible by the symmetry factor {0}")]
    NotDivisible(u64),

    #[error("unmarked vertex {vertex} has {incoming} incoming edges")]
    BadOrientation { vertex: usize, incoming: usize },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
