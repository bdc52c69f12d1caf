//! Command-line front end: configuration parsing and report generation.

mod config;
mod run;

pub use config::{Cli, CommandKind, Format, RunConfig};
pub use run::{exit_status, run, Outcome, EXIT_DOMAIN, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_PARSE, SCHEMA};
