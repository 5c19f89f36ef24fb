use thiserror::Error;

/// Errors raised by the numeric routines and the scenario engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A non-finite or otherwise malformed argument.
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    /// The argument is finite but outside the function's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The oracle could not bracket a decreasing tail of the objective.
    #[error("unbounded problem: {0}")]
    Unbounded(String),

    /// A scenario document failed to parse or validate.
    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    /// A numeric failure inside a sweep, tagged with the grid point.
    #[error("at p_x = {p_x}: {source}")]
    AtGridPoint { p_x: f64, source: Box<Error> },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for configuration problems (as opposed to numeric domain failures).
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
