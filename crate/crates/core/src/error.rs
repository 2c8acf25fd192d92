use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is below the minimum of 2")]
    DimensionTooSmall(usize),

    #[error("vector is not spacelike: {0}")]
    NotSpacelike(String),

    #[error("projector along a lightlike or zero vector is undefined")]
    DegenerateProjector,

    #[error("invalid piece: {0}")]
    InvalidPiece(String),

    #[error("hyperplane normal must be timelike and future-pointing")]
    InvalidHyperplane,

    #[error("regions {first} and {second} overlap")]
    OverlappingRegions { first: usize, second: usize },

    #[error("strings intersect")]
    NotDisjoint,

    #[error("configuration lies on the large string diagonal: strings {first} and {second} intersect")]
    OnDiagonal { first: usize, second: usize },

    #[error("constructed witness failed exact re-verification: {0}")]
    InternalVerificationFailure(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("string direction does not lie inside the direction cone")]
    DirectionNotInCone,

    #[error("refinement limit of {rounds} rounds exceeded at piece tuple {tuple:?}")]
    RefinementLimitExceeded { tuple: Vec<usize>, rounds: u32 },

    #[error("invalid chopping: {0}")]
    InvalidChopping(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
