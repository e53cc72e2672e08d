mod args;
mod commands;
mod emit;

use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use crate::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = args::check(&cli.command) {
        Cli::command()
            .error(clap::error::ErrorKind::ValueValidation, message)
            .exit();
    }
    match commands::execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
