use std::path::PathBuf;

use crate::geometry::Mode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configuration or parameter value violates an invariant.
    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("azimuth time {t_a} s lies outside the acquisition window [-{half}, {half}] s")]
    AzimuthDomain { t_a: f64, half: f64 },

    #[error("target {index} leaves the range window ({detail})")]
    TargetOutsideWindow { index: usize, detail: String },

    #[error("range coverage: requested fast time [{lo:.9e}, {hi:.9e}] s exceeds recorded window [{win_lo:.9e}, {win_hi:.9e}] s")]
    RangeCoverage {
        lo: f64,
        hi: f64,
        win_lo: f64,
        win_hi: f64,
    },

    #[error("band coverage: pulse {pulse} maps range frequency {freq:.6e} Hz outside the sampled band ±{half_band:.6e} Hz")]
    BandCoverage {
        pulse: usize,
        freq: f64,
        half_band: f64,
    },

    #[error("operation `{op}` is not defined for {mode} mode")]
    UnsupportedMode { op: &'static str, mode: Mode },

    #[error("degenerate matched filter: centroid rate must be non-zero")]
    DegenerateFilter,

    #[error("precondition of `{op}` failed: {reason}")]
    Precondition { op: &'static str, reason: String },

    #[error("no local maximum found {0}")]
    PeakNotFound(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("malformed file {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn precondition(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Precondition {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the `sga` binary.
    ///
    /// 2 covers anything the user can fix in their inputs, 3 covers failures
    /// of the numerical chain itself.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. }
            | Error::Json(_)
            | Error::Format { .. }
            | Error::UnsupportedMode { .. }
            | Error::Precondition { .. } => 2,
            Error::AzimuthDomain { .. }
            | Error::TargetOutsideWindow { .. }
            | Error::RangeCoverage { .. }
            | Error::BandCoverage { .. }
            | Error::DegenerateFilter
            | Error::PeakNotFound(_)
            | Error::Numerical(_) => 3,
            Error::Io { .. } => 1,
        }
    }
}
