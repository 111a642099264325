use std::io::{self, Write};
use std::panic;
use std::process::ExitCode;

use rebalance::cli;

fn main() -> ExitCode {
    let outcome = panic::catch_unwind(|| {
        let stdout = io::stdout();
        let stderr = io::stderr();
        cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
    });
    let code = outcome.unwrap_or_else(|_| {
        let _ = writeln!(io::stderr(), "error: internal failure");
        cli::EXIT_INTERNAL
    });
    io::stdout().flush().ok();
    ExitCode::from(code as u8)
}
