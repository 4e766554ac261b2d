//! `unlgen`: batch generation, scoring and grammar checks.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "unlgen",
    version,
    about = "Generate sentences from UNL documents with a dictionary and a rule grammar"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one sentence per {unl} block.
    Generate(GenerateArgs),
    /// Score candidate sentences against references.
    Eval(EvalArgs),
    /// Lint a grammar and validate a dictionary.
    Check(CheckArgs),
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub unl: PathBuf,
    #[arg(long)]
    pub dict: PathBuf,
    #[arg(long)]
    pub grammar: PathBuf,
    /// Attribute compatibility table (`@attr FEATURE` per line).
    #[arg(long)]
    pub compat: Option<PathBuf>,
    /// Write sentences here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Trace level 0-4, written to standard error.
    #[arg(long, env = "UNLGEN_TRACE", default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=4))]
    pub trace: u8,
    #[arg(long, default_value_t = unlgen::engine::DEFAULT_MAX_FIRINGS, value_parser = parse_positive)]
    pub max_firings: usize,
    /// Keep whitespace exactly as the rules produce it.
    #[arg(long)]
    pub keep_spaces: bool,
    /// Do not insert a blank between juxtaposed words of a sequence action.
    #[arg(long)]
    pub no_blank_joins: bool,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["corpus", "candidate"])))]
pub struct EvalArgs {
    /// Tab-separated `id candidate reference` lines.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// One candidate per line; pairs with --reference line by line.
    #[arg(long, requires = "reference")]
    pub candidate: Option<PathBuf>,
    #[arg(long, requires = "candidate")]
    pub reference: Option<PathBuf>,
    /// Print the report as JSON instead of tab-separated text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub dict: PathBuf,
    #[arg(long)]
    pub grammar: PathBuf,
    #[arg(long)]
    pub compat: Option<PathBuf>,
    /// Print the parsed rules in canonical form.
    #[arg(long)]
    pub dump_ast: bool,
    /// Print the parsed dictionary in canonical form.
    #[arg(long)]
    pub dump_dict: bool,
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Exit code 2 is reserved for incomplete generation.
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let code = match cli.command {
        Command::Generate(args) => commands::generate(&args),
        Command::Eval(args) => commands::eval(&args),
        Command::Check(args) => commands::check(&args),
    };
    ExitCode::from(code)
}
