use std::process::ExitCode;

use clap::Parser;
use cvgauss_cli::error::EXIT_OK;
use cvgauss_cli::{emit, execute, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli.command).and_then(|outcome| emit(&outcome));
    match result {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            if matches!(cli.command, Command::ValidateConfig(_)) {
                eprintln!("config is valid");
            }
            ExitCode::from(EXIT_OK)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
