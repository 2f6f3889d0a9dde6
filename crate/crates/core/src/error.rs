use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input error: {0}")]
    Input(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not a Poincaré algebra: pairing degenerate in degree {degree}")]
    NotPoincare { degree: u32 },

    #[error("refused: {0}")]
    Refused(String),

    /// An internal consistency check failed; this signals a bug, not bad input.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
