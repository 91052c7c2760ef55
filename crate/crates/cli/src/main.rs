//! `plainalign`: harvest, clean, align, evaluate and score parallel
//! complex/simplified corpora.
//!
//! Exit codes: 0 success, 1 invalid data, 2 I/O or network failure, 64 usage.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plainalign_core::eval::EvalSubset;

#[derive(Debug, Parser)]
#[command(name = "plainalign", version, about = "Parallel complex/simplified corpus toolkit")]
pub struct Cli {
    /// Seed for sampling steps; the current commands are deterministic without it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fetch and pair documents for the sites in a config file.
    Harvest(HarvestArgs),
    /// Remove short, near-identical and duplicated aligned pairs.
    Clean(CleanArgs),
    /// Align every pair of a manifest.
    Align(AlignArgs),
    /// Score predicted alignments against gold alignments.
    EvalAlign(EvalAlignArgs),
    /// Print corpus statistics.
    Stats(StatsArgs),
    /// Score simplification outputs with SARI, BLEU and FRE.
    Metrics(MetricsArgs),
}

#[derive(Debug, Args)]
pub struct HarvestArgs {
    /// JSON array of site configs.
    #[arg(long)]
    pub sites: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Serve pages from `<dir>/index.tsv` instead of the network.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    /// Record this date (YYYY-MM-DD) instead of today's.
    #[arg(long)]
    pub access_date: Option<String>,
}

#[derive(Debug, Args)]
pub struct CleanArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub alignments: PathBuf,
    /// Directory receiving alignments.tsv, cleaned_pairs.tsv and cleaning_report.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Massalign,
    Cats,
    Embed,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Aligner config as JSON; missing keys take their defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the chosen method's threshold from the config.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Directory of `<doc_id>.emb` files, required by `embed`.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long)]
    pub mutual_best: bool,
    /// Alignment TSV to write.
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_subset(s: &str) -> Result<EvalSubset, String> {
    s.parse().map_err(|e: plainalign_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct EvalAlignArgs {
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long)]
    pub pred: PathBuf,
    /// Check indices against these documents; needed for --exclude-identical.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// all, 1to1 or ntom.
    #[arg(long, default_value = "all", value_parser = parse_subset)]
    pub subset: EvalSubset,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, requires = "manifest")]
    pub exclude_identical: bool,
    /// Also write the report here; a `.json` extension selects JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub alignments: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// One source sentence per line.
    #[arg(long)]
    pub sources: PathBuf,
    #[arg(long, required_unless_present = "identity", conflicts_with = "identity")]
    pub outputs: Option<PathBuf>,
    #[arg(long)]
    pub refs: PathBuf,
    /// Score the sources themselves as outputs.
    #[arg(long)]
    pub identity: bool,
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn init_logging() -> Result<(), String> {
    let level = std::env::var("PLAINALIGN_LOG").unwrap_or_else(|_| "warn".into());
    if !["error", "warn", "info", "debug"].contains(&level.as_str()) {
        return Err(format!("PLAINALIGN_LOG must be error, warn, info or debug, got {level:?}"));
    }
    env_logger::Builder::new().parse_filters(&level).format_timestamp(None).init();
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(msg) = init_logging() {
        eprintln!("error: {msg}");
        return ExitCode::from(64);
    }
    log::debug!("seed {}", cli.seed);
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
