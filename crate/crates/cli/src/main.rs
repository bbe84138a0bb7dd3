use std::process::ExitCode;

use clap::Parser;
use lieforge_cli::{execute, RunConfig};

fn main() -> ExitCode {
    ExitCode::from(execute(&RunConfig::parse()))
}
