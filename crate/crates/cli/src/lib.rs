//! Session documents and the `dvar` command set.

pub mod commands;
pub mod document;
pub mod report;

pub use commands::{run_args, run_command, Cli, Command};
pub use document::{DocError, SessionDocument};
pub use report::{CommandResult, Diagnostic, Status};

/// Loads `text` and runs the command line `args`; document errors become
/// results with status `error` and a source position.
pub fn run_text<S: AsRef<str>>(text: &str, args: &[S]) -> CommandResult {
    match SessionDocument::parse(text) {
        Ok(doc) => run_args(&doc, args),
        Err(e) => CommandResult::located(e.message, e.line, e.column),
    }
}
