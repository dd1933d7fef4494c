use std::process::ExitCode;

use clap::Parser;
use tracing_subscriber::EnvFilter;

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("warn")))
        .with_writer(std::io::stderr)
        .init();
    match quickdash_cli::Cli::try_parse() {
        Ok(cli) => quickdash_cli::run(cli),
        // Status 2 is reserved for spec validation failures, so usage errors exit with 1.
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                ExitCode::from(quickdash_cli::EXIT_FAILURE)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
