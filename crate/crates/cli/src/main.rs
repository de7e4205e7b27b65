mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{CatalogAction, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Invariants(a) => commands::invariants(a),
        Command::Svp(a) => commands::svp(a),
        Command::Verify(a) => commands::verify(a),
        Command::Orbit(a) => commands::orbit(a),
        Command::Catalog {
            action: CatalogAction::List(a),
        } => commands::catalog_list(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
