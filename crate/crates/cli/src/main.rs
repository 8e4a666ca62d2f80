mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};

use config::{Cli, Format, RunConfig};

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Compute(heightcount::Error),
}

impl From<heightcount::Error> for Failure {
    fn from(e: heightcount::Error) -> Self {
        Failure::Compute(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            _ => 1,
        }
    }

    fn line(&self) -> String {
        let (kind, message) = match self {
            Failure::Usage(m) => ("Usage", m.clone()),
            Failure::Io(m) => ("Io", m.clone()),
            Failure::Compute(e) => (e.kind(), e.to_string()),
        };
        let message = message.split_whitespace().collect::<Vec<_>>().join(" ");
        format!("error: kind={kind} message={message}")
    }
}

fn parse(args: Vec<OsString>) -> Result<RunConfig, Result<String, Failure>> {
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Err(Ok(e.to_string()))
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            return Err(Err(Failure::Usage(first)));
        }
    };
    let name = matches.subcommand_name().unwrap_or_default().to_string();
    let cli = Cli::from_arg_matches(&matches).map_err(|e| Err(Failure::Usage(e.to_string())))?;
    let opts = cli.command.opts();
    let cfg = RunConfig::from_opts(&name, opts);
    if opts.dry_run {
        commands::validate(&cfg).map_err(Err)?;
        let text = serde_json::to_string_pretty(&cfg).expect("config serializes");
        return Err(Ok(text + "\n"));
    }
    Ok(cfg)
}

fn emit(cfg: &RunConfig, out: &commands::Output) -> Result<(), Failure> {
    let text = match cfg.format {
        Format::Csv => out.csv.clone(),
        Format::Json => serde_json::to_string_pretty(&out.json).expect("json") + "\n",
    };
    match &cfg.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            println!("{}", path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    Ok(())
}

fn run(args: Vec<OsString>) -> Result<(), Failure> {
    let cfg = match parse(args) {
        Ok(cfg) => cfg,
        Err(Ok(text)) => {
            print!("{text}");
            return Ok(());
        }
        Err(Err(f)) => return Err(f),
    };
    commands::validate(&cfg)?;
    let out = commands::execute(&cfg)?;
    emit(&cfg, &out)
}

fn main() {
    if let Err(f) = run(std::env::args_os().collect()) {
        eprintln!("{}", f.line());
        std::process::exit(f.exit_code());
    }
}
