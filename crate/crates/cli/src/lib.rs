//! Command-line harness around `stackopt-core`: scenario-file ingestion,
//! run-directory persistence, and CSV/JSON report emission.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use error::CliError;
