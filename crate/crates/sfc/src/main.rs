use std::process::ExitCode;

use clap::Parser;
use sfc::cli::{run, Cli};

fn main() -> ExitCode {
    let (out, code) = run(Cli::parse());
    println!("{out}");
    ExitCode::from(code)
}
