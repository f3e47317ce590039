use std::process::ExitCode;

use photon_indist::cli::{parse_args, run, CliError};

fn main() -> ExitCode {
    let outcome = parse_args(std::env::args_os()).and_then(|config| run(&config).map(|_| ()));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Info(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("photon-indist: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
