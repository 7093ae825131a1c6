//! Frame files, bundled fixtures, reports and the subcommands behind the
//! `incompat` binary.

pub mod commands;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod report;

pub use commands::{cmd_analyze, cmd_generate, cmd_multi, cmd_validate, Options, SelectionSpec};
pub use error::{CliError, CliResult};
pub use report::Report;
