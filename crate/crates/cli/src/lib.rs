//! File formats and command implementations behind the `probmet` binary.

pub mod commands;
pub mod format;
