use std::io::ErrorKind;

use clap::Parser;
use qtrellis::cli::{run, Cli, CliError};

fn broken_pipe(e: &CliError) -> bool {
    match e {
        CliError::Io(io) => io.kind() == ErrorKind::BrokenPipe,
        CliError::Json(j) => j.io_error_kind() == Some(ErrorKind::BrokenPipe),
        _ => false,
    }
}

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    if let Err(e) = run(&cli, &mut stdout.lock()) {
        if broken_pipe(&e) {
            return;
        }
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
