use std::process::ExitCode;

use clap::Parser;
use concbound_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    match run(&cli, &argv, &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            e.into()
        }
    }
}
