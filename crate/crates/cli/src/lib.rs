//! Batch front end for the `certframe` kernel: load a frame spec, run a
//! computation at a requested binary precision and print certified
//! decimals.

pub mod commands;
pub mod render;
pub mod spec;
pub mod suites;

pub use commands::{run, Cli, Command};
