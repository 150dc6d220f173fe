//! Command-line front end for `wstrata`.
//!
//! [`run`] parses an argument vector and returns a [`CommandOutcome`]; the
//! binary only prints it. Exit codes: 0 success, 1 a mathematical check
//! failed, 2 usage or resource error.

pub mod cache;
mod commands;
pub mod parse;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use cache::{cache_load, cache_path, cache_store};

/// Environment variable that takes precedence over `--cache`.
pub const CACHE_ENV: &str = "STRATA_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    /// JSON, CSV or DOT text for stdout
    pub payload: String,
    /// lines for stderr
    pub diagnostics: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Falsified(String),
    #[error(transparent)]
    Core(#[from] wstrata::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Falsified(_) | CliError::Core(wstrata::Error::Falsified(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "wstrata", version, about = "EO and KR strata combinatorics for GSp(2g)")]
pub struct Cli {
    /// Output format for tabular payloads.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for cached admissible sets (overridden by STRATA_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group facts: diagram, τ, t^μ, final elements.
    Info {
        #[arg(long)]
        g: usize,
    },
    /// The admissible set Adm(μ).
    Adm {
        #[arg(long)]
        g: usize,
        /// Only print the number of elements.
        #[arg(long, conflicts_with = "list")]
        count: bool,
        /// List every element (the default).
        #[arg(long)]
        list: bool,
    },
    /// Blocks of Adm_J(μ).
    AdmJ {
        #[arg(long)]
        g: usize,
        /// Comma-separated nodes, e.g. 0,2.
        #[arg(long)]
        j: String,
    },
    /// Superspecial / supersingular classification of KR strata.
    Classify {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        j: String,
        /// Element word, e.g. "s1 t"; all strata when omitted.
        #[arg(long, num_args = 1..)]
        x: Option<Vec<String>>,
    },
    /// Final elements, elementary sequences and the EO/KR match.
    Eo {
        #[arg(long)]
        g: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        g: usize,
        /// all, coxeter, perm-adm, lemma3, lemma4, thm45 or eo.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Hasse diagram of Adm(μ) in DOT.
    Hasse {
        #[arg(long)]
        g: usize,
        /// Write the DOT file here and print a summary instead.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

/// Runs with the cache directory taken from the environment when set.
pub fn run<I, S>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let env = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    run_with_cache_override(argv, env)
}

/// Like [`run`], with an explicit value standing in for the environment variable.
pub fn run_with_cache_override<I, S>(argv: I, env_cache: Option<PathBuf>) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let exit_code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if exit_code == 0 {
                CommandOutcome { exit_code, payload: text, diagnostics: vec![] }
            } else {
                CommandOutcome { exit_code, payload: String::new(), diagnostics: vec![text.trim_end().to_string()] }
            };
        }
    };
    let cache = env_cache.or(cli.cache.clone());
    let mut diagnostics = Vec::new();
    match commands::dispatch(&cli, cache.as_deref(), &mut diagnostics) {
        Ok((exit_code, payload)) => CommandOutcome { exit_code, payload, diagnostics },
        Err(e) => {
            diagnostics.push(format!("error: {e}"));
            CommandOutcome { exit_code: e.exit_code(), payload: String::new(), diagnostics }
        }
    }
}
