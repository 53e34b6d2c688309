use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("partition points must satisfy 0 = a_0 < a_1 < ... < a_k = 1")]
    NonMonotonePartition,
    #[error("slope must lie strictly between 0 and 1")]
    LambdaOutOfRange,
    #[error("branch {0} maps outside [0, 1)")]
    BranchEscapesUnit(usize),
    #[error("invalid map specification: {0}")]
    InvalidSpec(String),
    #[error("point {0} is outside [0, 1)")]
    PointOutOfDomain(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("itinerary is empty")]
    EmptyItinerary,
    #[error("branch index {index} is not in 1..={branches}")]
    InvalidBranch { index: usize, branches: usize },
    #[error("operation requires exact arithmetic")]
    FloatModeUnsupported,
    #[error("parameters violate 0 < 1 - lambda < b < 1")]
    ParameterOutsideTriangle,
    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: u64, q: u64 },
    #[error("rotation fraction {p}/{q} must satisfy 1 <= p < q")]
    BadRange { p: u64, q: u64 },
    #[error("connection polynomial is identically zero")]
    IdenticallyZero,
    #[error("box-count profile has fewer than two distinct counts")]
    DegenerateFit,
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
