//! Batch front end for the morgandk kernel: checks theory files, reduces
//! terms, queries the interval and face oracles and reports critical pairs.

pub mod cli;
pub mod commands;
pub mod io;
pub mod report;
pub mod trace;

pub use cli::{Cli, CliConfig, Command, Flag, Format, OracleKind};
pub use commands::{run, Exit};
