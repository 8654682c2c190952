//! File formats, configuration, command verbs and parallel drivers around
//! `hazard-eeg-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod epochs;
pub mod error;
pub mod formats;
pub mod io;
pub mod manifest;
pub mod model_io;
pub mod pipeline;

pub use config::PipelineConfig;
pub use error::{Error, Result};
