use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid edge {{{i},{j}}} on {n} vertices")]
    InvalidEdge { i: usize, j: usize, n: usize },

    #[error("size mismatch: {what} has size {got}, instance expects {expected}")]
    SizeMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("n={n} is not supported here: n must be divisible by 4")]
    UnsupportedInstance { n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error("{0}")]
    Domain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("budget exceeded: {what} supports n <= {cap}, got n={n}{hint}")]
    BudgetExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
        hint: &'static str,
    },

    #[error("structure hit is not contractible: {0}")]
    NotContractible(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
