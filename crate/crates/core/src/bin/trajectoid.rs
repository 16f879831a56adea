use std::process::ExitCode;

use clap::Parser;
use trajectoid::cli::{self, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    ExitCode::from(cli::main(Cli::parse()))
}
