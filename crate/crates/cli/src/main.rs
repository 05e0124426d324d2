mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::{EXIT_INTERNAL, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads as usize).build_global() {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(EXIT_INTERNAL);
    }
    let result = match &cli.command {
        Command::Geodesic(g) => commands::geodesic(g),
        Command::Flength(a) => commands::flength(a),
        Command::Check(a) => commands::check(&a.config),
        Command::Solve(a) => commands::solve(a),
        Command::Flux(a) => commands::flux(a),
        Command::Example(a) => commands::example(a.name.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
