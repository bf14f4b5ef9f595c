//! Command-line driver for `holodyn`. Every subcommand is declared in
//! [`schema::COMMANDS`]; its keys are accepted as `--key VALUE` flags and in a
//! `key=value` file given with `--config`, flags winning.

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod presets;
pub mod schema;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Arg, ArgMatches, Command};

use crate::config::ExperimentConfig;
use crate::error::CliError;

fn command() -> Command {
    let mut cmd = Command::new("holodyn")
        .version(holodyn::VERSION)
        .about("Experiments in holomorphic and interval dynamics")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for spec in schema::COMMANDS {
        let mut sub = Command::new(spec.name).about(spec.about).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("key=value file; flags override it"),
        );
        for key in spec.keys() {
            let help = match key.default {
                Some(d) => format!("{} [default: {d}]", key.help),
                None => key.help.to_string(),
            };
            let help = if key.name == "format" {
                format!("{help}; one of {}", spec.formats.join(", "))
            } else {
                help
            };
            sub = sub.arg(
                Arg::new(key.name)
                    .long(key.name)
                    .value_name("VALUE")
                    .help(help),
            );
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

fn flags(spec: &schema::CommandSpec, m: &ArgMatches) -> Vec<(String, String)> {
    spec.keys()
        .iter()
        .filter_map(|k| {
            m.get_one::<String>(k.name)
                .map(|v| (k.name.to_string(), v.clone()))
        })
        .collect()
}

fn execute(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let start = Instant::now();
    match cfg.subcommand.as_str() {
        "paper-figures" => {
            let outcome = figures::paper_figures(cfg)?;
            output::emit(cfg, outcome, start.elapsed().as_secs_f64())?;
        }
        "baseline-check" => {
            let (outcome, failures) = figures::baseline_check(cfg)?;
            output::emit(cfg, outcome, start.elapsed().as_secs_f64())?;
            if failures > 0 {
                return Err(CliError::BaselineMismatch(failures));
            }
        }
        _ => {
            let outcome = commands::execute(cfg)?;
            output::emit(cfg, outcome, start.elapsed().as_secs_f64())?;
        }
    }
    Ok(())
}

fn run_matches(matches: &ArgMatches) -> Result<(), CliError> {
    let (name, m) = matches
        .subcommand()
        .ok_or_else(|| CliError::config("missing subcommand"))?;
    let spec = schema::find(name)
        .ok_or_else(|| CliError::config(format!("unknown subcommand {name:?}")))?;
    let file = m.get_one::<String>("config").map(PathBuf::from);
    let cfg = ExperimentConfig::resolve(spec, file.as_deref(), flags(spec, m))?;
    let threads: usize = cfg.parse("threads")?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::config(format!("--threads {threads}: {e}")))?;
    pool.install(|| execute(&cfg))
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_matches(&matches) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("holodyn: {e}");
            e.exit_code()
        }
    }
}
