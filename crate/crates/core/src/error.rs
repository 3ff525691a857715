use thiserror::Error;

pub type Result<T, E = UvpError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum UvpError {
    #[error("budget exhausted: requested {requested} units with {remaining} remaining")]
    BudgetExhausted { requested: usize, remaining: usize },

    #[error("invalid budget: {0}")]
    InvalidBudget(String),

    #[error("insufficient candidates: need {needed}, have {available}")]
    InsufficientCandidates { needed: usize, available: usize },

    #[error("center set is empty")]
    EmptyCenters,

    #[error("history is empty")]
    EmptyHistory,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("point {point:?} lies outside the landscape domain")]
    OutOfDomain { point: Vec<f64> },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("grid of {points} points exceeds the cap of {cap}")]
    SizeOverflow { points: u128, cap: usize },

    #[error("instance of {size} points is too large for exhaustive search (cap {cap})")]
    TooLarge { size: usize, cap: usize },

    #[error("missing trace: {0}")]
    MissingTrace(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl UvpError {
    /// True for errors caused by the environment rather than by the request.
    pub fn is_io(&self) -> bool {
        match self {
            UvpError::Io(_) => true,
            UvpError::Csv(e) => e.is_io_error(),
            _ => false,
        }
    }
}
