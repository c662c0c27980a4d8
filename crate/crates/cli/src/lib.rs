//! Seeded, replayable experiment runner for `onebit-core`.
//!
//! Every run produces a [`ResultDocument`]: the full config (seed included)
//! plus all derived statistics. Re-running a document's config reproduces
//! its results bit-for-bit, which is what [`replay`] checks.

pub mod config;
pub mod document;
pub mod error;
pub mod experiments;

pub use config::ExperimentConfig;
pub use document::{execute, parse_document, replay, ResultDocument, Verdict, SCHEMA_VERSION};
pub use error::CliError;
