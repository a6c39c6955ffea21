use thiserror::Error;

/// Errors raised by the numerical kernels, solvers and the command layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("moment undefined: {0}")]
    MomentUndefined(String),

    #[error("constants unavailable for {law}: {reason}")]
    ConstantsUnavailable { law: String, reason: String },

    #[error("unsupported {what} for the {family} law")]
    Unsupported { what: &'static str, family: &'static str },

    #[error("integration failure: achieved error estimate {achieved:.3e} (requested {requested:.3e})")]
    IntegrationFailure { achieved: f64, requested: f64 },

    #[error("no solution below max_bracket = {0}")]
    NoSolution(f64),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("adjustment coefficient does not exist: {0}")]
    NoAdjustmentCoefficient(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("capital is infinite: {0}")]
    Infinite(String),

    #[error("incompatible backend: {0}")]
    Incompatible(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Domain(_) | Error::Io(_) => 2,
            Error::IntegrationFailure { .. } | Error::NoSolution(_) | Error::RootFinding(_) => 3,
            Error::MomentUndefined(_)
            | Error::ConstantsUnavailable { .. }
            | Error::Unsupported { .. }
            | Error::NoAdjustmentCoefficient(_)
            | Error::NotApplicable(_)
            | Error::Infinite(_)
            | Error::Incompatible(_) => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
