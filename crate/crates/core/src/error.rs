use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("root list is empty")]
    EmptyRoots,
    #[error("root {0} is the zero vector")]
    ZeroRoot(usize),
    #[error("root {index} has {got} components but the rank is {rank}")]
    RankMismatch { index: usize, got: usize, rank: usize },
    #[error("roots {0} and {1} coincide")]
    DuplicateRoot(usize, usize),
    #[error("root {0} has multiplicity zero")]
    ZeroMultiplicity(usize),
    #[error("point lies outside the closed positive chamber")]
    OutsideChamber,
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quadrature did not reach tolerance {tolerance:e} (error estimate {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },
    #[error("initial data is not admissible: {0}")]
    Inadmissible(String),
    #[error("grid too coarse: {0} interior nodes, at least 64 required")]
    GridTooCoarse(usize),
    #[error("sample is empty")]
    EmptySample,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
