use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Argument outside a tabulated or otherwise finite range.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A buffer or window is too small for the requested computation.
    #[error("capacity error: {msg} (required max_index = {required})")]
    Capacity { msg: String, required: u64 },

    /// A sequence buffer does not cover the indices an operation needs.
    #[error("range error: buffer covers [{have_lo}, {have_hi}), need [{need_lo}, {need_hi})")]
    Range {
        have_lo: u64,
        have_hi: u64,
        need_lo: u64,
        need_hi: u64,
    },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("zero on contour after {attempts} perturbations (min |F| = {min_modulus:e})")]
    OnContourZero { attempts: u32, min_modulus: f64 },

    /// Caller asked for a parameter regime the estimator refuses to run in.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn numeric(msg: impl Into<String>) -> Error {
    Error::Numeric(msg.into())
}
