use thiserror::Error;

/// Failure modes shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AfmError {
    /// No analytic global quantum number exists for this exponent/state pair.
    #[error("no analytic Q for p = {p} with (n, l) = ({n}, {l}); use the numeric oracle")]
    UnsupportedCase { p: f64, n: u32, l: u32 },

    /// The AFM system or the reference spectrum has no bound solution.
    #[error("no bound state: {0}")]
    NoBoundState(String),

    /// The solution falls to zero size or non-positive mass.
    #[error("collapse: {0}")]
    CollapseDetected(String),

    /// A grid-based eigenvalue did not settle within tolerance.
    #[error("eigenvalue not converged: {0}")]
    ConvergenceFailure(String),

    /// Inputs outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    DomainError(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),
}

impl AfmError {
    /// True for the two physical "no solution" outcomes (as opposed to bad input
    /// or numerical trouble).
    pub fn is_binding_failure(&self) -> bool {
        matches!(self, AfmError::NoBoundState(_) | AfmError::CollapseDetected(_))
    }
}

pub type Result<T> = std::result::Result<T, AfmError>;
