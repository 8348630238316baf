use thiserror::Error;

use crate::geometry::{Point, Scalar};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("wrong number of points: expected {expected}, found {found}")]
    WrongPointCount { expected: usize, found: usize },

    #[error("points are affinely dependent")]
    AffinelyDependent,

    #[error("degenerate transversal tuple (orientation 0): {points:?}")]
    DegenerateTuple { points: Vec<Point> },

    #[error("family is not in general position: {0}")]
    NotInGeneralPosition(String),

    #[error("exhaustive budget exceeded after {nodes} nodes; best lower bound {best_lower_bound}")]
    BudgetExceeded { best_lower_bound: Scalar, nodes: u64 },

    #[error("ham-sandwich search exhausted: {0}")]
    SearchExhausted(String),

    /// A proven inequality failed to hold; always an arithmetic bug.
    #[error("assertion failed: {0}")]
    AssertionFailed(String),

    #[error("no independent selection found within {rounds} resampling rounds")]
    ResampleLimitExceeded { rounds: u64 },

    #[error("extracted subsets failed the same-type check: {0}")]
    SameTypeVerificationFailed(String),

    #[error("random generation retries exhausted: {0}")]
    RetryExhausted(String),

    #[error("convex body spans only {dim} dimensions")]
    DegenerateBody { dim: usize },

    #[error("radius {radius} too large (must be below {max})")]
    RadiusTooLarge { radius: Scalar, max: Scalar },

    #[error("approximant audit failed repeatedly; max discrepancy {max_discrepancy}")]
    AuditFailedRepeatedly { max_discrepancy: Scalar },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 2 for usage/input problems, 3 for internal
    /// assertion failures, 1 for expected negative outcomes.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::AssertionFailed(_) | Error::SameTypeVerificationFailed(_) | Error::SearchExhausted(_) => 3,
            Error::ResampleLimitExceeded { .. }
            | Error::BudgetExceeded { .. }
            | Error::AuditFailedRepeatedly { .. }
            | Error::RetryExhausted(_) => 1,
            _ => 2,
        }
    }
}
