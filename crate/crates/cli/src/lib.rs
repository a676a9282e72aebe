//! Library half of the welfare-order command-line tool: configuration
//! parsing, canonical output formats, and the command implementations.

pub mod commands;
pub mod config;
pub mod io;

pub use commands::{cmd_compare, cmd_converge, cmd_exact, cmd_indices, cmd_simulate, CliError};
pub use config::RunConfig;
