use std::io::Read;
use std::process::ExitCode;

use clap::Parser;
use dvar_cli::{run_command, Cli, CommandResult, SessionDocument};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            // usage errors are command errors too, reported in the requested format
            let message = e.to_string();
            let first = message.lines().next().unwrap_or_default();
            let r = CommandResult::error(first.trim_start_matches("error: "));
            if std::env::args().any(|a| a == "--json") {
                print!("{}", r.render_json());
            } else {
                eprint!("{message}");
            }
            return ExitCode::from(r.exit_code() as u8);
        }
    };
    let text = match &cli.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map(|_| s)
                .map_err(|e| format!("standard input: {e}"))
        }
    };
    let result = match text {
        Err(e) => CommandResult::error(e),
        Ok(text) => match SessionDocument::parse(&text) {
            Ok(doc) => run_command(&doc, &cli.command, cli.certify),
            Err(e) => CommandResult::located(e.message, e.line, e.column),
        },
    };
    if cli.json {
        print!("{}", result.render_json());
    } else {
        print!("{}", result.render_text());
    }
    ExitCode::from(result.exit_code() as u8)
}
