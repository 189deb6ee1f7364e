mod commands;
mod config;
mod svg;

use std::fs;
use std::process::ExitCode;

use clap::Parser;
use hyperperc::{Error, ErrorKind};

use crate::config::{Command, Config};

const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

fn main() -> ExitCode {
    let mut config = Config::parse();
    if let Some(n) = config.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if let Command::Run { config: path } = &config.command {
        match load_config(path) {
            Ok(c) => config = c,
            Err(e) => return report(e),
        }
    }
    if let Some(path) = &config.global.save_config {
        let text = serde_json::to_string_pretty(&config).expect("config serializes");
        if let Err(e) = fs::write(path, text) {
            return report(Error::Io(format!("{}: {e}", path.display())));
        }
    }
    match commands::run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(e),
    }
}

fn load_config(path: &std::path::Path) -> hyperperc::Result<Config> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let config: Config = serde_json::from_str(&text)?;
    if matches!(config.command, Command::Run { .. }) {
        return Err(Error::precondition("a saved config cannot itself be `run`"));
    }
    Ok(config)
}

fn report(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(match e.kind() {
        ErrorKind::Usage => EXIT_USAGE,
        ErrorKind::Resource => EXIT_RESOURCE,
        ErrorKind::Invariant => EXIT_INVARIANT,
    })
}
