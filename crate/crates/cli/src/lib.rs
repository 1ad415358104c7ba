//! Orchestration for the `cocycle-lab` command.

pub mod config;
pub mod error;
pub mod eval;
pub mod suites;

pub use config::{Keys, Settings};
pub use error::{CliError, Result};
pub use suites::{run, Report, Suite};

/// Serializes a report; equal inputs give byte-identical output.
pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}
