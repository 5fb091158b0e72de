//! Command-line front end for `landau1d`: argument parsing, JSON config
//! defaults, run records and CSV tables.

pub mod args;
mod commands;
pub mod output;

use std::ffi::OsString;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgMatches, CommandFactory, FromArgMatches};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

pub use args::Cli;
pub use output::{ErrorRecord, RunRecord, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "LANDAU1D_THREADS";

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    let config = match cli.config.as_deref().map(load_config).transpose() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let ctx = Context { matches: &matches, config: config.as_ref(), seed: cli.seed };
    match commands::dispatch(&cli.command, &ctx) {
        Ok(()) => EXIT_OK,
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            EXIT_USAGE
        }
        Err(commands::Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            EXIT_COMPUTE
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        return Err(format!("{THREADS_ENV} must be positive"));
    }
    // a second call in the same process (tests) keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn load_config(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("config {} is not valid JSON: {e}", path.display()))?;
    if !v.is_object() {
        return Err(format!("config {} must hold a JSON object", path.display()));
    }
    Ok(v)
}

pub(crate) struct Context<'a> {
    matches: &'a ArgMatches,
    config: Option<&'a Value>,
    seed: Option<u64>,
}

impl Context<'_> {
    /// Seed from the command line, then the config file, then `default`.
    pub(crate) fn seed(&self, default: u64) -> Result<u64, String> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match self.config.and_then(|c| c.get("seed")) {
            None => Ok(default),
            Some(v) => v.as_u64().ok_or_else(|| format!("config seed must be a nonnegative integer, got {v}")),
        }
    }

    /// Overlays config values on every argument not given on the command
    /// line. `path` names the subcommand, e.g. `["landscape", "profiles"]`;
    /// keys at the top level of the config apply to every command and a
    /// section named after the command (`"landscape profiles"`) overrides
    /// them. Unknown keys are ignored.
    pub(crate) fn resolve<A: Serialize + DeserializeOwned>(&self, parsed: &A, path: &[&str]) -> Result<A, String> {
        let Some(config) = self.config else {
            return round_trip(parsed);
        };
        let mut leaf = self.matches;
        let mut cmd = Cli::command();
        for name in path {
            leaf = leaf.subcommand_matches(name).ok_or_else(|| format!("no matches for subcommand {name}"))?;
            cmd = cmd.find_subcommand(name).cloned().ok_or_else(|| format!("unknown subcommand {name}"))?;
        }
        // config keys may be field names (`half_width`) or flag names (`L`, `max-matvecs`)
        let field_of = |key: &str| -> Option<String> {
            cmd.get_arguments()
                .find(|a| a.get_id() == key || a.get_long().is_some_and(|l| l == key || l.replace('-', "_") == key))
                .map(|a| a.get_id().to_string())
        };
        let mut obj = match serde_json::to_value(parsed).map_err(|e| e.to_string())? {
            Value::Object(m) => m,
            _ => return Err("arguments do not serialize to an object".into()),
        };
        let section = config.get(path.join(" ")).and_then(Value::as_object);
        let empty = Map::new();
        let top = config.as_object().unwrap_or(&empty);
        for source in [top, section.unwrap_or(&empty)] {
            for (key, value) in source {
                let Some(field) = field_of(key).filter(|f| obj.contains_key(f)) else {
                    continue;
                };
                if leaf.value_source(&field) != Some(ValueSource::CommandLine) {
                    obj.insert(field, value.clone());
                }
            }
        }
        serde_json::from_value(Value::Object(obj)).map_err(|e| format!("config does not fit the command: {e}"))
    }
}

fn round_trip<A: Serialize + DeserializeOwned>(a: &A) -> Result<A, String> {
    serde_json::from_value(serde_json::to_value(a).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}
