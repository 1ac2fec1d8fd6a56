//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature specification cannot be used as given.
    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(String),

    /// Structurally degenerate input (zero state, empty grid, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Two objects live on different grids.
    #[error("grid mismatch: expected {expected} points, got {got}")]
    GridMismatch { expected: usize, got: usize },

    /// A discretized operator violates a structural requirement.
    #[error("operator construction failed: {0}")]
    Operator(String),

    /// An explicit time step violates its stability bound.
    #[error(
        "unstable step: dt * max|symbol|^(1/alpha) = {actual:.3e} exceeds {limit}; \
         use at least {min_steps} steps"
    )]
    UnstableStep {
        actual: f64,
        limit: f64,
        min_steps: usize,
    },

    /// A series or iteration failed to converge within its budget.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// File access failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A data file does not have the expected shape or syntax.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
