//! File formats, run configuration and command implementations for the
//! `compind` tool. The numerical work lives in `compind-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod ingest;
pub mod output;

pub use config::RunConfig;
pub use error::{AppError, AppResult};
