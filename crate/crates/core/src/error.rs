use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("grid is too small: {0}")]
    GridTooSmall(String),

    #[error("grid does not vanish on its boundary (max |value| = {boundary_max:e}, allowed {allowed:e})")]
    BoundaryNotVanishing { boundary_max: f64, allowed: f64 },

    #[error("inadmissible smoothness s = {s} for p = {p}: need 0 < s < min(1/p, 1 - 1/p)")]
    Inadmissible { s: f64, p: f64 },

    #[error("cost guard: {0}")]
    CostGuard(String),

    #[error("malformed grid file {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("experiment `{name}` failed: {source}")]
    Experiment {
        name: String,
        #[source]
        source: Box<Error>,
    },

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
