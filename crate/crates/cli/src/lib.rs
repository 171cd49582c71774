//! Library side of the `afm` binary: configuration, commands and output.

pub mod commands;
pub mod config;
pub mod table;
pub mod verify;

use salpeter_afm::error::AfmError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Afm(#[from] AfmError),
    /// A binding failure with the condition it violates spelled out.
    #[error("{error}\n{explanation}")]
    Window { error: AfmError, explanation: String },
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0} verification checks failed")]
    Verification(usize),
}

impl CliError {
    /// 1 verification failure, 2 no bound state or collapse, 3 bad config.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 3,
            CliError::Afm(e) | CliError::Window { error: e, .. } => match e {
                AfmError::NoBoundState(_)
                | AfmError::CollapseDetected(_)
                | AfmError::DomainError(_)
                | AfmError::UnsupportedCase { .. } => 2,
                AfmError::InvalidPotential(_) => 3,
                AfmError::ConvergenceFailure(_) | AfmError::LinearAlgebra(_) => 1,
            },
            CliError::Verification(_) => 1,
        }
    }
}

/// Short machine-readable name for a row status column.
pub fn error_kind(e: &AfmError) -> &'static str {
    match e {
        AfmError::UnsupportedCase { .. } => "unsupported_case",
        AfmError::NoBoundState(_) => "no_bound_state",
        AfmError::CollapseDetected(_) => "collapse",
        AfmError::ConvergenceFailure(_) => "not_converged",
        AfmError::DomainError(_) => "domain_error",
        AfmError::InvalidPotential(_) => "invalid_potential",
        AfmError::LinearAlgebra(_) => "linear_algebra",
    }
}
