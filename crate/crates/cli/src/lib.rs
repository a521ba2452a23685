//! Front end for `toprec-core`: curve-spec files, run configuration and
//! report writers behind the `toprec` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod spec;

pub use commands::{run, Outcome};
pub use config::{Cli, RunConfig};
pub use error::{CliError, ExitCode};
