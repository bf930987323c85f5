use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use probmet_cli::commands::{finish, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command).and_then(|outcome| {
        let code = finish(&outcome)?;
        Ok((outcome.text, code))
    });
    match result {
        Ok((text, code)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
