mod args;
mod cmd;
mod error;
mod io;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Mask(c) => cmd::mask::run(c),
        Command::Phantom(c) => cmd::phantom::run(c),
        Command::Simulate(c) => cmd::simulate::run(c),
        Command::Analyze(c) => cmd::analyze::run(c),
        Command::Recon(c) => cmd::recon::run(c),
        Command::Verify(c) => cmd::verify::run(c),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
