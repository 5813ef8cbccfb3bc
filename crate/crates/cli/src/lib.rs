//! Command-line front end: algebra file format, report document and
//! subcommands.

pub mod commands;
pub mod format;
pub mod report;
