use thiserror::Error;

/// Errors raised by the solvers and their setup.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZakharovError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("profile magnitude {magnitude:.3e} at the domain boundary exceeds {limit:.1e}; enlarge the domain")]
    Truncation { magnitude: f64, limit: f64 },

    #[error("tridiagonal elimination broke down at row {row} (|pivot| = {pivot:.3e})")]
    PivotBreakdown { row: usize, pivot: f64 },

    #[error(
        "fixed-point iteration did not converge at step {step} (last residual {residual:.3e})"
    )]
    FixedPoint { step: usize, residual: f64 },

    #[error("non-finite value produced at step {step} (t = {time})")]
    BlowUp { step: usize, time: f64 },
}

pub type Result<T> = std::result::Result<T, ZakharovError>;
