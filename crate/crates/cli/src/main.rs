//! `isde`: seeded, reproducible runs of the simulations, samplers, kernel
//! evaluations, audits and acceptance experiments, each writing data CSVs and
//! a JSON manifest into an output directory.

mod commands;
mod output;
mod params;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Arg, ArgAction, Command};

use output::{Manifest, OutputDir};
use params::{ConfigFile, Params, SUBCOMMANDS};

/// Environment variable giving the default output directory.
pub const OUT_ENV: &str = "ISDE_OUT";
const DEFAULT_OUT: &str = "isde-out";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] isde::Error),
}

fn command() -> Command {
    let mut cmd = Command::new("isde")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Interacting Brownian motions: simulation, sampling and statistics")
        .subcommand_required(true)
        .arg(Arg::new("config").long("config").global(true).value_name("FILE").help("key = value file with [subcommand] sections"))
        .arg(
            Arg::new("out")
                .long("out")
                .global(true)
                .value_name("DIR")
                .help("output directory; falls back to the config, then $ISDE_OUT, then isde-out"),
        );
    for sub in SUBCOMMANDS {
        let mut sc = Command::new(sub.name).about(sub.about).allow_negative_numbers(true);
        if let Some(pos) = sub.positional {
            sc = sc.arg(Arg::new("positional").value_name(pos).help(format!("same as --{pos}")).action(ArgAction::Set));
        }
        for p in sub.params {
            let help = match p.default {
                Some("") | None => p.help.to_string(),
                Some(d) => format!("{} [default: {d}]", p.help),
            };
            sc = sc.arg(Arg::new(p.name).long(p.name).value_name("VALUE").allow_hyphen_values(true).help(help));
        }
        cmd = cmd.subcommand(sc);
    }
    cmd
}

fn execute() -> Result<(PathBuf, Vec<String>), CliError> {
    let matches = command().get_matches();
    let (name, sub_matches) = matches.subcommand().expect("a subcommand is required");
    let sub = params::subcommand(name).expect("subcommands come from the table");
    let config = match sub_matches.get_one::<String>("config") {
        Some(path) => ConfigFile::read(path.as_ref())?,
        None => ConfigFile::default(),
    };
    let mut flags = BTreeMap::new();
    for p in sub.params {
        if let Some(v) = sub_matches.get_one::<String>(p.name) {
            flags.insert(p.name.to_string(), v.clone());
        }
    }
    if let Some(pos) = sub.positional {
        if let Some(v) = sub_matches.get_one::<String>("positional") {
            if flags.contains_key(pos) {
                return Err(CliError::Invalid { field: pos.into(), reason: "given both positionally and as a flag".into() });
            }
            flags.insert(pos.to_string(), v.clone());
        }
    }
    let params = Params::resolve(sub, &flags, &config)?;
    let root = sub_matches
        .get_one::<String>("out")
        .map(PathBuf::from)
        .or_else(|| config.out(sub.name).map(PathBuf::from))
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));

    let start = Instant::now();
    let mut out = OutputDir::create(&root)?;
    let result = commands::run(&params, &mut out).and_then(|()| {
        let files = out.files().to_vec();
        out.write_json("manifest.json", &Manifest::new(&params, &files, start.elapsed().as_secs_f64()))
    });
    match result {
        Ok(()) => Ok((out.root().to_path_buf(), out.files().to_vec())),
        Err(e) => {
            out.discard();
            Err(e)
        }
    }
}

fn main() -> ExitCode {
    match execute() {
        Ok((root, files)) => {
            println!("wrote {} files to {}", files.len(), root.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
