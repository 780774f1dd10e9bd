use thiserror::Error;

/// Errors raised by the diagnostics and generators in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),

    #[error("degenerate web: |grad phi1 ^ grad phi2| = {jacobian:e} is below {threshold:e}")]
    DegenerateWeb { jacobian: f64, threshold: f64 },

    #[error("bad scale: requested 2^-{requested} but the set lives at 2^-{set_scale}")]
    BadScale { requested: u32, set_scale: u32 },

    #[error("scale mismatch: {0} vs {1}")]
    ScaleMismatch(u32, u32),

    #[error("empty set")]
    EmptySet,

    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("generator error: {0}")]
    Generator(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
