use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use shafdyn_cli::{exit_status, run, Cli, RunConfig};

fn main() -> ExitCode {
    let cfg = match RunConfig::from_cli(Cli::parse()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("shafdyn: {e}");
            return ExitCode::from(exit_status(&e) as u8);
        }
    };
    let out = run(&cfg, &mut std::io::stdin().lock());
    std::io::stdout().write_all(out.report.as_bytes()).ok();
    std::io::stderr().write_all(out.diagnostics.as_bytes()).ok();
    ExitCode::from(out.status as u8)
}
