mod config;
mod error;
mod output;
mod run;

use std::process::ExitCode;

use clap::Parser;

use crate::config::Cli;
use crate::error::CliResult;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ZBW_LOG", "warn")).init();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("zbw: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<bool> {
    let (kind, args) = cli.command.parts();
    let cfg = config::resolve(kind, args)?;
    log::debug!("resolved {cfg:?}");
    let outcome = run::execute(&cfg)?;
    for f in &outcome.outputs {
        log::info!("{} sha256 {}", f.path.display(), f.sha256);
    }
    Ok(outcome.passed)
}
