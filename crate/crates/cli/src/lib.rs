//! Command-line front end: argument parsing, the three subcommands, and the
//! report formats.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;

pub use error::{exit, CliError, CliResult};
