use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown isotopologue '{0}'")]
    UnknownIsotopologue(String),

    #[error("numerical failure: {message} (achieved {achieved:.3e})")]
    Numeric { message: String, achieved: f64 },

    #[error("parameters not identifiable: {0}")]
    Identifiability(String),

    #[error("ambiguous assignment between lines {first} and {second}: defect spacing {spacing:.3} rounds outside 1..=3")]
    Assignment {
        first: usize,
        second: usize,
        spacing: f64,
    },

    #[error("wall calibration failed: {0}")]
    Calibration(String),

    #[error("grid too coarse: eigenvalue shifted by {shift_cm1:.3e} cm-1 under 2x refinement")]
    Resolution { shift_cm1: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, achieved: f64) -> Self {
        Error::Numeric {
            message: msg.into(),
            achieved,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
