//! Library side of the `quadsemi` command: every subcommand returns JSON
//! values and an exit code, so tests can drive it without a process.

pub mod commands;
pub mod format;
pub mod render;

pub use commands::{CliError, Output};
