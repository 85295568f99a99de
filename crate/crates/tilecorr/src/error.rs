use thiserror::Error;

/// Errors raised by region construction, counting and the correlation evaluators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("hole footprints overlap")]
    HoleOverlap,
    #[error("hole footprint extends outside the hexagon")]
    HoleOutOfBounds,
    #[error("quadromer distance R must be at least 1")]
    RadiusZero,
    #[error("hole coordinates ({0}, {1}) repeated within one list")]
    DuplicateHole(u32, u32),
    #[error("bump label {0} out of range")]
    LabelOutOfRange(u32),
    #[error("bump label {0} repeated")]
    DuplicateLabel(u32),
    #[error("labels must be strictly increasing")]
    NotStrictlyIncreasing,
    #[error("region is not path-encodable in this direction")]
    BadDirection,
    #[error("region too large: {0}")]
    TooLarge(String),
    #[error("term budget exceeded: {needed} terms needed, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("x must lie in (0, 1]")]
    XOutOfRange,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("distance of a hole to itself requested")]
    SameHole,
    #[error("quadrature did not reach tolerance")]
    QuadratureFailure,
    #[error("axis label {0} used twice")]
    LabelClash(u32),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
