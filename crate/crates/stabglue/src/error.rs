use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("phase of the zero vector is undefined")]
    DegeneratePhase,
    #[error("invalid stability function: {0}")]
    InvalidStabilityFunction(String),
    #[error("invalid charge: {0}")]
    InvalidCharge(String),
    #[error("not in region: {0}")]
    NotInRegion(String),
    #[error("chart coordinate lies on the branch cut")]
    BranchCut,
    #[error("hypothesis ({condition}) violated: {detail}")]
    Hypothesis { condition: usize, detail: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("restriction to a ramification point needs genus(Y) >= 1")]
    PreconditionGenus,
    #[error("undecidable: {0}")]
    Undecidable(String),
    #[error("sign test straddles a wall: {0}")]
    StraddlesWall(String),
    #[error("heart is not a rotation of the standard heart: {0}")]
    UnsupportedHeart(String),
    #[error("unsupported object: {0}")]
    UnsupportedObject(String),
    #[error("unresolved symbol: {0}")]
    UnresolvedSymbol(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("hearts are not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("inconsistent stability data: {0}")]
    InvalidStability(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
