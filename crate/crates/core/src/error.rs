use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A table or distribution failed validation (row sums, lengths, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// Conditioning on a prefix of probability zero.
    #[error("cannot condition on zero-probability prefix {prefix:?}")]
    Conditioning { prefix: Vec<usize> },

    /// Exhaustive enumeration over X^n would exceed the atom budget.
    #[error("enumeration budget exceeded: |X|^n = {alphabet}^{horizon} atoms, limit is 2^20")]
    Budget { alphabet: usize, horizon: usize },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The class has no argmax oracle, so the Step-r regularizer cannot be
    /// built from class members.
    #[error("class has no argmax oracle; use the uniform i.i.d. regularizer instead")]
    NoArgmaxOracle,

    /// A countable mixture was evaluated where the analytic tail bound is
    /// too loose relative to the evaluated mass.
    #[error("mixture tail bound {bound:e} exceeds 1e-12 of evaluated mass {mass:e}")]
    TailBound { bound: f64, mass: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),

    /// An in-process check (bound vs. series, invariant) failed.
    #[error("check failed: {0}")]
    Check(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
