use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A curve parameter outside the curve's domain.
    #[error("parameter {tau} outside curve domain [{min}, {max}]")]
    Domain { tau: f64, min: f64, max: f64 },

    /// A source coincides (within the guard distance) with a point of the array.
    #[error("source at ({x}, {y}) lies on the array (distance {distance:e})")]
    Singularity { x: f64, y: f64, distance: f64 },

    /// An input outside the domain an approximation or kernel supports.
    #[error("range error: {0}")]
    Range(String),

    /// A closed-form approximation used outside its validity regime.
    #[error("approximation domain violated: {0}")]
    ApproximationDomain(String),

    /// Invalid construction parameters.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Quadrature ran out of node budget before reaching the requested tolerance.
    #[error(
        "quadrature did not converge: error estimate {error_estimate:e} after {nodes_used} nodes"
    )]
    Convergence {
        best: Complex64,
        error_estimate: f64,
        nodes_used: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be finite, got {v}")))
    }
}
