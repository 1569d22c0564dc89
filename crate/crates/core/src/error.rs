use std::io;

/// Errors produced anywhere in the codec, the container format or the harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input carries no usable energy or structure (e.g. a zero autocorrelation).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("LSP conversion failed: found {found} of {expected} roots")]
    LspConversion { found: usize, expected: usize },

    #[error("truncated input: {0}")]
    Truncated(String),

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
