//! Command-line front end for the `rpgroup` engine: TOML workspaces, the
//! command set and deterministic text or JSON reports.

pub mod bundle;
pub mod commands;
pub mod error;
pub mod report;
pub mod workspace;

pub use commands::{load, run, Cli, Command, Options, OutputFormat};
pub use error::{CliError, CliResult};
pub use report::Report;
pub use workspace::Workspace;
