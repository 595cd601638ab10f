//! Command-line front end and the grid service behind the explorer.

pub mod args;
pub mod commands;
pub mod grid;
pub mod server;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};

/// Parses `argv` (program name first) and runs the subcommand. Returns the
/// process exit status: 0 on success, 1 on a failed command, 2 on a usage
/// error.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Convert(a) => commands::convert(a),
        Command::Inspect(a) => commands::inspect(a),
        Command::Loo(a) => commands::loo(a),
        Command::Separate(a) => commands::separate(a),
        Command::Split(a) => commands::split(a),
        Command::Predict(a) => commands::predict(a),
        Command::MlpTrain(a) => commands::mlp_train(a),
        Command::MlpAugment(a) => commands::mlp_augment(a),
        Command::Serve(a) => commands::serve(a),
        Command::Grid(a) => commands::grid(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
