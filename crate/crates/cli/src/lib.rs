//! Command-line front end: JSON network documents, the `analyze`, `oracle`
//! and `gen` subcommands, and their reports.

pub mod commands;
pub mod document;
pub mod generate;

pub use commands::{analyze, analyze_document, gen, oracle, oracle_document, AnalyzeOptions, CliError, OracleOptions, Outcome};
pub use document::{DocumentError, NetworkDocument};
pub use generate::{generate, GenParams};
