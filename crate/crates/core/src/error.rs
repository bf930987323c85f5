use alloc::string::String;

use thiserror::Error;

/// Rejections from the value grammar (`"5"`, `"5/3"`, `"inf"`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseValueError {
    #[error("`{0}`: rationals only, decimal notation is not accepted")]
    Decimal(String),
    #[error("`{0}`: expected an integer, a fraction p/q or `inf`")]
    Malformed(String),
    #[error("`{0}`: zero denominator")]
    ZeroDenominator(String),
    #[error("`{0}`: level must lie in [0, 1]")]
    OutOfUnitInterval(String),
}

/// Step-function shape violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("level function needs at least one piece")]
    EmptyLevelFunction,
    #[error("level endpoints must be strictly increasing and positive (piece {0})")]
    EndpointOrder(usize),
    #[error("last level endpoint must be 1")]
    LastEndpoint,
    #[error("level values must be nonincreasing (UD canonical form), violated at piece {0}")]
    LevelNotMonotone(usize),
    #[error("level 0 is outside the domain (0, 1]")]
    ZeroLevel,
    #[error("jump points must be finite and strictly increasing (jump {0})")]
    JumpOrder(usize),
    #[error("distribution values must be positive and strictly increasing (jump {0})")]
    DistributionNotMonotone(usize),
    #[error("pointwise operation on an empty list")]
    EmptyList,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Step(#[from] StepError),
    #[error("duplicate point id `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point index {0} out of range")]
    PointOutOfRange(usize),
    #[error("distance table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("t-norm mismatch: {0} vs {1}")]
    TNormMismatch(&'static str, &'static str),
    #[error("map does not fit the carriers: {0}")]
    MapMismatch(String),
    #[error("structured source has no maps")]
    EmptySource,
    #[error("product carrier of {size} points exceeds the cap of {cap}")]
    ProductTooLarge { size: usize, cap: usize },
    #[error("point `{0}` lies in the closure of the set; no separating cospan exists")]
    PointInClosure(String),
    #[error("map is not non-expansive")]
    NotNonExpansive,
    #[error("cospan {0} does not agree on the set")]
    CospanDisagrees(usize),
    #[error("not an extended metric: {0}")]
    InvalidMetric(String),
    #[error("space fails the axioms: {0}")]
    InvalidSpace(String),
    #[error("T0 characterizations disagree: {0}")]
    T0Disagreement(String),
}
