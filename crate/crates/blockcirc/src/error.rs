use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid ensemble or operation parameters (bad dimensions, empty
    /// pattern, unsupported sizes, ...).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Index outside `1..=N`.
    #[error("index ({i}, {j}) out of range for dimension {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },

    /// A numerical or combinatorial invariant that must hold by construction
    /// failed (e.g. a non-integral genus). Panic-level: indicates a bug, not
    /// bad input.
    #[error("numerical invariant violated: {0}")]
    InvariantViolation(String),

    /// Iterative eigensolver failed to reach its convergence threshold.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }
}
