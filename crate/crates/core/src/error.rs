//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by model construction, parsing, and the analyses.
#[derive(Debug, Error)]
pub enum Error {
    /// A task violates one of the model invariants. Carries the task index
    /// (0-based) and the offending field.
    #[error("task {index}, field '{field}': {message}")]
    InvalidTask {
        index: usize,
        field: &'static str,
        message: String,
    },

    /// The task set as a whole is invalid (empty, bad processor count, ...).
    #[error("invalid task set: {0}")]
    InvalidTaskSet(String),

    /// The input document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A parameter passed to an operation is out of its domain.
    #[error("invalid parameter '{name}': {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// The requested test does not apply to the given input (wrong deadline
    /// class, wrong platform, unmet ratio precondition). The caller may want
    /// to surface this as a not-applicable verdict instead of a failure.
    #[error("{test}: not applicable: {reason}")]
    NotApplicable { test: &'static str, reason: String },

    /// A fixed-point iteration exceeded its divergence horizon.
    #[error("response-time iteration exceeded horizon {horizon}")]
    Divergence { horizon: f64 },
}

impl Error {
    pub(crate) fn not_applicable(test: &'static str, reason: impl Into<String>) -> Self {
        Error::NotApplicable {
            test,
            reason: reason.into(),
        }
    }
}
