//! Command-line front end for the identity checker.
//!
//! The binary is a thin wrapper around [`run`]; the pieces are public so
//! that tests can drive them without spawning a process.

pub mod args;
mod output;
mod run;

pub use args::{Cli, Command, Common, OutputFormat};
pub use run::{build_tasks, run, select, verify_tasks, Exit, Task};
