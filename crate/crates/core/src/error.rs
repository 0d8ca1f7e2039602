//! Crate-wide error type.

use alloc::string::String;

/// Errors produced by the algorithm and simulation modules.
///
/// Variants are equatable so callers can match on failure classes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// Input bytes did not form a supported image.
    #[error("malformed image: {0}")]
    Format(String),
    /// A calibration search could not meet its target.
    #[error("calibration failed: {0}")]
    Calibration(String),
    /// An iterative computation did not settle within its budget.
    #[error("no convergence: {0}")]
    Convergence(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn argument(msg: impl core::fmt::Display) -> Error {
    Error::Argument(alloc::format!("{msg}"))
}

pub(crate) fn format_err(msg: impl core::fmt::Display) -> Error {
    Error::Format(alloc::format!("{msg}"))
}

pub(crate) fn calibration(msg: impl core::fmt::Display) -> Error {
    Error::Calibration(alloc::format!("{msg}"))
}

pub(crate) fn convergence(msg: impl core::fmt::Display) -> Error {
    Error::Convergence(alloc::format!("{msg}"))
}
