//! Command-line front end: `recast`, `split`, `stats`, `validate`.
//!
//! Exit codes: 0 success, 1 usage error, 2 processing failure, 3 plugin
//! protocol violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use tabrecast::error::{Error, Result};
use tabrecast::instance::SourceTask;
use tabrecast::pipeline::{self, PipelineConfig};
use tabrecast::recast::RecastLimits;

#[derive(Parser)]
#[command(
    name = "tabrecast",
    version,
    about = "Recast tabular datasets into tabular NLI instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recast a source JSONL file into NLI instances plus a tables sidecar
    Recast(RecastArgs),
    /// Split an instances file into train/test by table
    Split(SplitArgs),
    /// Count an instances file into run-shaped statistics
    Stats(StatsArgs),
    /// Re-check instance labels against the tables sidecar
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    #[value(name = "t2tg")]
    T2tg,
    #[value(name = "tqa_short")]
    TqaShort,
    #[value(name = "tqa_long")]
    TqaLong,
    #[value(name = "spt")]
    Spt,
}

impl From<TaskArg> for SourceTask {
    fn from(t: TaskArg) -> SourceTask {
        match t {
            TaskArg::T2tg => SourceTask::T2tg,
            TaskArg::TqaShort => SourceTask::TqaShort,
            TaskArg::TqaLong => SourceTask::TqaLong,
            TaskArg::Spt => SourceTask::Spt,
        }
    }
}

#[derive(Args)]
struct RecastArgs {
    /// Source task the input lines belong to
    #[arg(long, value_enum)]
    task: TaskArg,
    /// Input JSONL of source examples
    #[arg(long)]
    input: PathBuf,
    /// Output JSONL of instances; the tables sidecar is written next to it
    /// as <output>.tables.jsonl
    #[arg(long)]
    output: PathBuf,
    /// Run seed; every line derives its own generator from (seed, line)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; the output is identical for any count
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Entailments per base statement
    #[arg(long, default_value_t = 5)]
    max_entailments: usize,
    /// Substitution contradictions per base statement (antonym swaps get
    /// the same budget separately)
    #[arg(long, default_value_t = 5)]
    max_contradictions: usize,
    /// Do not build counterfactual tables
    #[arg(long)]
    no_cf: bool,
    /// Add one plugin paraphrase per substitution-family instance
    #[arg(long)]
    paraphrase: bool,
    /// Antonym lexicon TSV overriding the bundled one
    #[arg(long)]
    antonyms: Option<PathBuf>,
    /// Abbreviation map TSV overriding the bundled one
    #[arg(long)]
    abbreviations: Option<PathBuf>,
    /// Statement/paraphrase plugin command line
    #[arg(long)]
    plugin: Option<String>,
}

#[derive(Args)]
struct SplitArgs {
    /// Instances JSONL to split
    #[arg(long)]
    input: PathBuf,
    /// Fraction of tables that become the test side (0 < ratio < 1)
    #[arg(long)]
    ratio: f64,
    /// Shuffle seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Train-side output path
    #[arg(long)]
    train_out: PathBuf,
    /// Test-side output path
    #[arg(long)]
    test_out: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    /// Instances JSONL to count
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// Instances JSONL to re-check
    #[arg(long)]
    instances: PathBuf,
    /// Tables sidecar; defaults to <instances>.tables.jsonl
    #[arg(long)]
    tables: Option<PathBuf>,
}

fn run_command(command: Command) -> Result<()> {
    match command {
        Command::Recast(args) => {
            let config = PipelineConfig {
                task: args.task.into(),
                input: args.input,
                output: args.output,
                seed: args.seed,
                workers: args.workers,
                limits: RecastLimits {
                    max_entailments: args.max_entailments,
                    max_contradictions: args.max_contradictions,
                    enable_cf: !args.no_cf,
                    enable_paraphrase: args.paraphrase,
                },
                antonyms: args.antonyms,
                abbreviations: args.abbreviations,
                plugin_cmd: args.plugin,
            };
            let stats = pipeline::run(&config)?;
            println!("{}", serde_json::to_string_pretty(&stats)?);
        }
        Command::Split(args) => {
            let report = pipeline::split(
                &args.input,
                args.ratio,
                args.seed,
                &args.train_out,
                &args.test_out,
            )?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Stats(args) => {
            let stats = pipeline::stats_from_file(&args.input)?;
            println!("{}", serde_json::to_string_pretty(&stats)?);
        }
        Command::Validate(args) => {
            let tables = args
                .tables
                .unwrap_or_else(|| pipeline::tables_sidecar_path(&args.instances));
            let report = pipeline::validate(&args.instances, &tables)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits with 2 on bad arguments by default; this tool
            // reserves 2 for processing failures and reports usage as 1.
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return ExitCode::from(code);
        }
    };
    match run_command(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tabrecast: {e}");
            let code = match e {
                Error::Usage(_) => 1,
                Error::PluginProtocol(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
