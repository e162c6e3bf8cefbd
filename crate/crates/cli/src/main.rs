use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = pxmap_cli::Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match pxmap_cli::run(&cli, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("pxmap: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code)
}
