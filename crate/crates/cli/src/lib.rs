//! Experiment harness around the `formopt-core` toolkit.
//!
//! The library half of the `formopt` binary: experiment configuration,
//! dataset ingestion and synthesis, the comparison and timing experiments,
//! surrogate training with the MLP-vs-ANFIS table, sample-size assessment
//! plumbing, the model-then-optimize pipeline, and deterministic report
//! emission. The binary in `main.rs` is a thin argument layer over these
//! modules.

pub mod comparison;
pub mod config;
pub mod data;
pub mod error;
pub mod pipeline;
pub mod reports;
pub mod timing;
pub mod train_cmd;

pub use error::{CliError, Result};
