use thiserror::Error;

/// Errors raised anywhere in the solver stack.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("equality rows are linearly dependent")]
    RankDeficientRows,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("objective is not concave: {0} positive eigenvalue(s)")]
    NotConcave(usize),

    #[error("vertex set is not a vertex cover: edge {0}-{1} is uncovered")]
    NotAVertexCover(usize, usize),

    #[error("kappa {kappa} out of range 0..={vertices}")]
    KappaOutOfRange { kappa: usize, vertices: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
