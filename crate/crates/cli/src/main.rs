//! `blogcascade`: ingest blog citation logs, extract cascades, compute
//! statistics and compare against the re-targeting null model.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use blogcascade::time::Timestamp;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "blogcascade", version, about = "Citation cascades in blog networks")]
struct Cli {
    /// Worker threads; 1 runs everything serially. Defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter raw posts and citations; write the clean corpus and its summary.
    Ingest(IngestArgs),
    /// Extract cascades and compute shape census, distributions and fits.
    Analyze(AnalyzeArgs),
    /// Run the null model and compare its cascades with the real ones.
    Compare(CompareArgs),
    /// Estimate the latency exponent used by the null model.
    Fit(FitArgs),
}

/// Where the corpus comes from: raw files, or a directory written by `ingest`.
#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Line-delimited JSON posts (post_id, blog_id, published_at).
    #[arg(long, requires = "citations", conflicts_with = "corpus")]
    pub posts: Option<PathBuf>,
    /// CSV citations with header `src_post_id,dst_post_id`.
    #[arg(long, requires = "posts", conflicts_with = "corpus")]
    pub citations: Option<PathBuf>,
    /// Directory written by `ingest` (posts.jsonl and citations.csv).
    #[arg(long, required_unless_present = "posts")]
    pub corpus: Option<PathBuf>,
    /// First instant of the crawl window (RFC 3339); defaults to the earliest post.
    #[arg(long)]
    pub window_start: Option<Timestamp>,
    /// Last instant of the crawl window (RFC 3339, inclusive); defaults to the latest post.
    #[arg(long)]
    pub window_end: Option<Timestamp>,
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    /// Line-delimited JSON posts (post_id, blog_id, published_at).
    #[arg(long)]
    pub posts: PathBuf,
    /// CSV citations with header `src_post_id,dst_post_id`.
    #[arg(long)]
    pub citations: PathBuf,
    /// First instant of the crawl window (RFC 3339); defaults to the earliest post.
    #[arg(long)]
    pub window_start: Option<Timestamp>,
    /// Last instant of the crawl window (RFC 3339, inclusive); defaults to the latest post.
    #[arg(long)]
    pub window_end: Option<Timestamp>,
    /// Directory for the outputs and manifest.json; created if missing.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Tab-separated `post_id<TAB>topic` labels; `__UNAVAILABLE__` marks missing content.
    #[arg(long)]
    pub topics: Option<PathBuf>,
    /// Largest cascade (in nodes) that gets an exact shape code.
    #[arg(long, default_value_t = blogcascade::motifs::DEFAULT_CAP)]
    pub cap: usize,
    /// Upper bound in days for the latency fit.
    #[arg(long)]
    pub latency_xmax: Option<u64>,
    /// Directory for the outputs and manifest.json; created if missing.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// `key = value` file: theta, epsilon_seconds, realizations, base_seed,
    /// z_threshold, cap, latency_xmax. Flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Base seed; realization i uses stream i of this seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of model realizations [default: 100].
    #[arg(long)]
    pub realizations: Option<usize>,
    /// Latency-bias exponent; fitted from the corpus when absent.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Latency floor in seconds for candidate weights [default: 3600].
    #[arg(long)]
    pub epsilon_seconds: Option<f64>,
    /// |z| above which a shape is flagged [default: 3].
    #[arg(long)]
    pub z_threshold: Option<f64>,
    /// Largest cascade (in nodes) that gets an exact shape code [default: 8].
    #[arg(long)]
    pub cap: Option<usize>,
    /// Upper bound in days for the theta fit.
    #[arg(long)]
    pub latency_xmax: Option<u64>,
    /// Directory for the outputs and manifest.json; created if missing.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Upper bound in days for the latency fit.
    #[arg(long)]
    pub latency_xmax: Option<u64>,
    /// Directory for the outputs and manifest.json; created if missing.
    #[arg(long)]
    pub out_dir: PathBuf,
}

fn run(cli: Cli) -> Result<()> {
    let parallel = cli.threads != Some(1);
    let go = move || match cli.command {
        Command::Ingest(args) => commands::ingest(&args),
        Command::Analyze(args) => commands::analyze(&args),
        Command::Compare(args) => commands::compare(&args, parallel),
        Command::Fit(args) => commands::fit(&args),
    };
    match cli.threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(go),
        _ => go(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<commands::InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
