//! IO, file formats, and command implementations behind the `sc2d` binary.

pub mod bandstack;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod pgm;
pub mod t3b;

pub use error::{CliError, CliResult};
