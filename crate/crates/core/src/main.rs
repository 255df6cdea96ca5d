use std::process::ExitCode;

use clap::Parser;

use effcut::cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let code = run(&config, &mut std::io::stdout().lock());
    ExitCode::from(code as u8)
}
