use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = clonescope::cli::Cli::parse();
    match clonescope::cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
