use std::io::Write;
use std::process::ExitCode;

use atlas::cli::{self, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let args = Cli::parse();
    match cli::run(&args) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.text.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("atlas: a checked identity failed");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("atlas: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
