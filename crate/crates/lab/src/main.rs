use std::process::ExitCode;

use clap::Parser;
use emden_lab::config::{Cli, RunConfig};

fn main() -> ExitCode {
    // clap exits with 2 on malformed arguments.
    let cli = Cli::parse();
    match RunConfig::from_cli(cli).and_then(|cfg| emden_lab::execute(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("emden: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
