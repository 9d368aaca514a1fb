//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Window length is incompatible with the series (m < 2, m > n, ...).
    #[error("invalid window: {0}")]
    InvalidWindow(String),

    /// A value is NaN or infinite where a finite sample is required.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// Planted pattern positions overlap or fall outside the series.
    #[error("invalid plant: {0}")]
    InvalidPlant(String),

    /// Anytime budget is empty or non-positive.
    #[error("invalid budget: {0}")]
    InvalidBudget(String),

    /// Profiles cannot be merged (different m, length or exclusion radius).
    #[error("invalid merge: {0}")]
    InvalidMerge(String),

    /// Include/exclude dimension sets are inconsistent.
    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),

    /// Subsequence pair is inside the exclusion zone or out of range.
    #[error("invalid pair: {0}")]
    InvalidPair(String),

    /// Discretization bit depth is too small.
    #[error("invalid bits: {0}")]
    InvalidBits(String),

    /// Requested result count is zero.
    #[error("invalid count: {0}")]
    InvalidCount(String),

    /// Annotation length does not match its series.
    #[error("invalid annotation: {0}")]
    InvalidAnnotation(String),

    /// Degenerate threshold search interval.
    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    /// Shape is longer than the series it is matched against.
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// Lag is out of range for the annotation.
    #[error("invalid lag: {0}")]
    InvalidLag(String),

    /// Training annotation contains no positive segment.
    #[error("no positive segments in annotation")]
    NoPositives,

    /// No shape candidate could be extracted (all segments shorter than every m).
    #[error("no shape candidates: {0}")]
    NoCandidates(String),

    /// Malformed input file; `line` is 1-based where applicable.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Malformed binary container.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
