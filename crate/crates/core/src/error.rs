use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: {0}")]
    DimError(String),

    #[error("schedule error: {0}")]
    ScheduleError(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported limit: {0}")]
    UnsupportedLimit(String),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error("degenerate Hamiltonian pair: difference is proportional to the identity")]
    DegeneratePair,

    #[error("dimension {0} too large for exhaustive search (max {1})")]
    UnsupportedDimension(usize, usize),

    #[error("degenerate task: {0}")]
    DegenerateTask(String),

    #[error("a machine serving {0} distinct Hamiltonians is not a state-preparation device")]
    NotAThermalizer(usize),

    #[error("digamma pole at z = {0}")]
    PoleError(f64),

    #[error("quadrature did not converge: {0}")]
    QuadratureError(String),

    #[error("speed-limit violation at t = {time}: margin {margin:e}")]
    BoundViolation { time: f64, margin: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
