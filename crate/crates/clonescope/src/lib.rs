//! Clone-account detection over social-network datasets: ingestion,
//! synthetic data, the training and prediction pipeline, and the CLI.

pub mod bundle;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod formats;
pub mod pipeline;
pub mod synthetic;

pub use error::{Error, Result};
