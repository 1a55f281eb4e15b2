//! Command-line surface over the core library: trace and mind file formats,
//! simulation configs, run outputs, and the four subcommands.

pub mod commands;
pub mod configfile;
pub mod errors;
pub mod mindfile;
pub mod outputs;
pub mod trace;
