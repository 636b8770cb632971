use thiserror::Error;

/// Errors raised by the coefficient engine and its numerical backend.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty word: a monomial needs at least one letter")]
    EmptyWord,

    /// `position` is 1-based.
    #[error("invalid character {found:?} at position {position}: words use only 'X' and 'Y'")]
    InvalidCharacter { position: usize, found: char },

    #[error("invalid order {order}: {reason}")]
    InvalidOrder { order: usize, reason: &'static str },

    #[error("invalid block X^{u} Y^{v} with {n} substrings: {reason}")]
    InvalidBlock {
        u: usize,
        v: usize,
        n: usize,
        reason: &'static str,
    },

    #[error("coefficient tables cover order {available}, but order {required} is required")]
    TableOverflow { required: usize, available: usize },

    #[error("could not allocate coefficient tables for max order {max_order}")]
    Allocation { max_order: usize },

    #[error("matrix is not near the identity: ||A - I||_F = {norm} (must be < 1)")]
    NotNearIdentity { norm: String },

    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed series: {0}")]
    MalformedSeries(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
