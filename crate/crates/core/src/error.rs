//! Crate-wide error type.

use alloc::string::String;

/// Errors produced by configuration checks, evaluation, and training.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A configuration value is out of range or inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// An objective or metric evaluation produced or received an invalid value.
    #[error("evaluation error: {0}")]
    Evaluation(String),
    /// Input data violates a schema or shape requirement.
    #[error("data error: {0}")]
    Data(String),
    /// Model training could not proceed.
    #[error("training error: {0}")]
    Training(String),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn evaluation(msg: impl Into<String>) -> Self {
        Error::Evaluation(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn training(msg: impl Into<String>) -> Self {
        Error::Training(msg.into())
    }
}

/// Shorthand used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
