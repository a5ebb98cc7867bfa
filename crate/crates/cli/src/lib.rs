//! Term-file syntax and the `sstate` commands.

pub mod commands;
pub mod syntax;
