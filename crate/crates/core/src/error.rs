use std::path::PathBuf;

use thiserror::Error;

use crate::state::SimState;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid scenario:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),

    #[error("dimension mismatch: {what} (expected {expected}, got {got})")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite state at t = {time}: {detail}")]
    NonFinite {
        time: f64,
        detail: String,
        last_valid: Box<SimState>,
    },

    #[error("time step collapsed below {min_dt:e} s at t = {time}")]
    StepCollapse { time: f64, min_dt: f64 },

    #[error("linear solve failed: {0}")]
    Solve(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed snapshot: {detail}")]
    Snapshot { path: PathBuf, detail: String },
}

impl Error {
    /// True for failures the CLI reports as numerical (exit code 3).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. } | Error::StepCollapse { .. } | Error::Solve(_)
        )
    }
}
