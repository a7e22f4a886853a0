//! Library surface of the `dmct` command-line tool: subcommand
//! implementations, report rendering, and the result cache. The binary in
//! `main.rs` is a thin argument-parsing layer over these modules.

pub mod cache;
pub mod commands;
pub mod report;
