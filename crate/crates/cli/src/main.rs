//! `tgc`: batch checker and query tool for `.tg` theory-graph sources.

mod commands;
mod inputs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "tgc", version, about = "Check theory graphs, query paths, transport theorems")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Allow transport along partially verified paths.
    #[arg(long, global = true)]
    allow_partial: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    #[value(alias = "json-like")]
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Elaborate, verify and cross-check everything under the given paths.
    Check {
        #[arg(default_value = ".")]
        paths: Vec<PathBuf>,
    },
    /// List theories reaching a target theory backwards along morphisms.
    Paths {
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
        #[arg(default_value = ".")]
        paths: Vec<PathBuf>,
    },
    /// Print a theorem transported along a chain of morphisms.
    Transport {
        /// `<theory>.<theorem>`
        theorem: String,
        #[arg(long, value_delimiter = ',', required = true)]
        via: Vec<String>,
        #[arg(default_value = ".")]
        paths: Vec<PathBuf>,
    },
    /// Run cross checks, optionally only one.
    Crosscheck {
        #[arg(long)]
        id: Option<String>,
        #[arg(default_value = ".")]
        paths: Vec<PathBuf>,
    },
}

#[derive(Clone, Debug)]
pub enum Action {
    Check,
    Paths { to: String },
    Transport { theory: String, theorem: String, via: Vec<String> },
    Crosscheck { id: Option<String> },
}

impl Action {
    pub fn name(&self) -> &'static str {
        match self {
            Action::Check => "check",
            Action::Paths { .. } => "paths",
            Action::Transport { .. } => "transport",
            Action::Crosscheck { .. } => "crosscheck",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub action: Action,
    pub format: Format,
    pub max_depth: usize,
    pub allow_partial: bool,
}

fn config(cli: Cli) -> Result<RunConfig, String> {
    let mut max_depth = 4;
    let (inputs, action) = match cli.command {
        Command::Check { paths } => (paths, Action::Check),
        Command::Paths { to, max_depth: d, paths } => {
            max_depth = d;
            (paths, Action::Paths { to })
        }
        Command::Transport { theorem, via, paths } => {
            let (theory, theorem) = theorem
                .split_once('.')
                .filter(|(a, b)| !a.is_empty() && !b.is_empty())
                .ok_or_else(|| format!("expected <theory>.<theorem>, got `{theorem}`"))?;
            let action = Action::Transport {
                theory: theory.to_string(),
                theorem: theorem.to_string(),
                via,
            };
            (paths, action)
        }
        Command::Crosscheck { id, paths } => (paths, Action::Crosscheck { id }),
    };
    Ok(RunConfig {
        inputs,
        action,
        format: cli.format,
        max_depth,
        allow_partial: cli.allow_partial,
    })
}

fn emit(cfg: &RunConfig, report: &Report) {
    match cfg.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => {
            if let Action::Transport { .. } = cfg.action {
                if let Some(decl) = report.declaration() {
                    print!("{decl}");
                }
                eprint!("{}", report.to_text());
            } else {
                print!("{}", report.to_text());
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("tgc: {e}");
            return ExitCode::from(2);
        }
    };
    let report = commands::run(&cfg);
    emit(&cfg, &report);
    ExitCode::from(report.exit_code)
}
