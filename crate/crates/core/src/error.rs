use thiserror::Error;

use crate::solver::SimulationResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value violates a type invariant. `field` is the dotted path of the
    /// offending input (e.g. `material.rho`).
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    /// A function was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed config: {0}")]
    Parse(String),

    #[error("time step {dt} s exceeds the stability limit {limit} s")]
    Unstable { dt: f64, limit: f64 },

    /// A non-finite or runaway value appeared. `partial` holds everything
    /// recorded up to the last good step when the failure happened inside `run`.
    #[error("numerical blow-up at step {step} (t = {time} s)")]
    BlowUp {
        step: u64,
        time: f64,
        partial: Option<Box<SimulationResult>>,
    },

    #[error("steady state not reached: {0}")]
    NotSteady(String),

    #[error("target not bracketed: {0}")]
    Bracket(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Short machine-readable category used by the CLI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Invalid { .. } => "validation",
            Error::Domain(_) => "domain",
            Error::Parse(_) => "parse",
            Error::Unstable { .. } => "stability",
            Error::BlowUp { .. } => "blowup",
            Error::NotSteady(_) => "not_steady",
            Error::Bracket(_) => "bracket",
            Error::Io { .. } => "io",
        }
    }
}
