use std::process::ExitCode;

use clap::Parser;
use qaffine::cli::{init_logging, run, Cli};

fn main() -> ExitCode {
    init_logging();
    run(Cli::parse())
}
