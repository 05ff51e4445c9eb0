//! File formats, run records and the `concbound` command-line front end.

pub mod commands;
pub mod error;
pub mod input;
pub mod record;

pub use commands::{run, Cli};
pub use error::CliError;
