use std::process::ExitCode;

use clap::Parser;
use morgandk::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.config();
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    match run(&cfg, &mut out, &mut err) {
        Ok(exit) => ExitCode::from(exit.code()),
        Err(e) => {
            eprintln!("morgandk: {e}");
            ExitCode::from(2)
        }
    }
}
