//! The `poslab` command line: a text format for graphs, arenas and
//! automata, and subcommands over the `positional` library.

pub mod commands;
pub mod format;

pub use commands::{run, Cli, CliError, Output};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
