use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("wrong shape: expected {expected}, got {got}")]
    WrongShape { expected: String, got: String },

    #[error("{what} exceeds the budget: requested {requested}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("subspace is not contained in the even-weight subspace")]
    NotEvenSubspace,

    #[error("degenerate split: vector is zero or all-ones")]
    DegenerateSplit,

    #[error("vector has odd weight; expected a member of the even-weight subspace")]
    OddWeight,

    #[error("not in ring image: degree {degree} coefficient lies outside the filtration space")]
    NotInRingImage { degree: usize },

    #[error("ring elements belong to different profiles")]
    ProfileMismatch,

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("permutation does not carry the filtration onto its counterpart (index {index})")]
    FlagConditionFailed { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("text format error: {0}")]
    TextFormat(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
