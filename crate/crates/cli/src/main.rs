use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod format;

/// Order-effect analysis of multidimensional relevance judgments in query logs.
#[derive(Debug, Parser)]
#[command(name = "orderfx", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count SFT / SFTSC / IRQ queries for each matching criteria.
    Analyze(AnalyzeArgs),
    /// Explain one query with two sequential judgment orders.
    Explain(ExplainArgs),
    /// Walk through a two-perspective order effect for one state.
    Project(ProjectArgs),
    /// Write a seeded synthetic query log.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExplainFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// JSON Lines query log.
    #[arg(long)]
    input: PathBuf,
    /// Scores are already normalized profile probabilities.
    #[arg(long)]
    normalized: bool,
    /// A click is satisfied when dwell strictly exceeds this many seconds.
    #[arg(long = "sat-dwell", default_value_t = 30.0)]
    sat_dwell: f64,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated matching criteria, reported in the given order.
    #[arg(long, value_delimiter = ',', default_value = "0.10,0.05,0")]
    criteria: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExplainArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Query id to explain.
    #[arg(long)]
    query: String,
    /// Dimension pair `first,second`; chosen automatically when omitted.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    dims: Option<Vec<String>>,
    /// Matching criteria used to check IRQ membership.
    #[arg(long, default_value_t = 0.0)]
    criteria: f64,
    #[arg(long, value_enum, default_value_t = ExplainFormat::Text)]
    format: ExplainFormat,
}

#[derive(Debug, Args)]
struct ProjectArgs {
    /// Probability of the first perspective's positive outcome.
    #[arg(long = "p-first")]
    p_first: f64,
    /// Probability of the second perspective's positive outcome.
    #[arg(long = "p-second")]
    p_second: f64,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Generator seed (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of queries (defaults to the preset's size, or 1000).
    #[arg(long)]
    queries: Option<usize>,
    /// Calibrate to the published query-log counts.
    #[arg(long, conflicts_with = "config")]
    table1: bool,
    /// JSON generator configuration; flags override its seed and size.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output JSON Lines file.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Explain(a) => commands::explain(a),
        Command::Project(a) => commands::project(a),
        Command::Synth(a) => commands::synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
