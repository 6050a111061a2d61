//! `cohort-miner`: the tweet mining pipeline as file-driven subcommands.
//!
//! Exit codes: 0 on success, 1 on usage or validation errors, 2 on I/O
//! errors.

mod commands;
mod failure;
mod manifest;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use failure::CliResult;

#[derive(Debug, Parser)]
#[command(name = "cohort-miner", version, about = "Mine first-person HIV-treatment tweets from a keyword-filtered corpus")]
pub struct Cli {
    /// Seed for every random choice (rater simulation, data split).
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Directory that relative paths are resolved against.
    #[arg(long, global = true, env = "COHORT_MINER_DATA", default_value = ".")]
    pub data_dir: PathBuf,

    /// Manifest file (default: manifest.json in the data directory).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    /// Run even if an input no longer matches its manifest checksum.
    #[arg(long, global = true)]
    pub force: bool,

    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse raw records, apply the keyword gate and write the corpus.
    Ingest(IngestArgs),
    /// Remove noise with the ordered rule file.
    Cleanse(CleanseArgs),
    /// Corpus statistics and per-tweet features.
    #[command(subcommand)]
    Features(FeaturesCommand),
    /// Apply the foreign-language cut to a features file.
    Langfilter(LangfilterArgs),
    /// Train the classifier on labeled features.
    Train(TrainArgs),
    /// Score features with a trained model.
    Score(ScoreArgs),
    /// ROC curve and operating threshold on a labeled sample.
    Roc(RocArgs),
    /// Run the annotation service.
    Serve(ServeArgs),
    /// Replay an annotation log and write the agreed labels.
    ExportLabels(ExportArgs),
    /// Descriptive outputs over the labeled signal tweets.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Write the synthetic fixture: raw tweets, rating log, effect tags and truth.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
    /// CSV of rejected lines (`line,reason`).
    #[arg(long)]
    pub rejects: Option<PathBuf>,
    /// Lexeme frequency table (`lexeme,rows,total`) of the gated corpus.
    #[arg(long)]
    pub frequency: Option<PathBuf>,
    /// Lexeme index sidecar of the gated corpus.
    #[arg(long)]
    pub index: Option<PathBuf>,
    /// Keep records that match no keyword.
    #[arg(long)]
    pub no_gate: bool,
    #[arg(long, default_value_t = 1000)]
    pub max_text_chars: usize,
    /// Reject an id already seen instead of skipping it.
    #[arg(long)]
    pub fail_on_duplicate: bool,
}

#[derive(Debug, Args)]
pub struct CleanseArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Rule file (default: the bundled rules).
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Per-rule removal counts (default: OUTPUT with `.report.csv`).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Signal-loss bounds for the annotated rule groups.
    #[arg(long)]
    pub loss_report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FeaturesCommand {
    /// Build the signal/noise/foreign statistics bundle from agreed labels.
    BuildStats {
        #[arg(long)]
        labels: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Extract the 37 features for every record of a JSONL corpus.
    Extract {
        input: PathBuf,
        #[arg(long)]
        stats: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct LangfilterArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Labels for the per-class yield report.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long, requires = "labels")]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub min_is_english: f64,
    #[arg(long, default_value_t = 150.0)]
    pub max_nchars: f64,
    #[arg(long, default_value_t = 14.0)]
    pub max_notenglish: f64,
    #[arg(long, default_value_t = 1.0)]
    pub min_word_ratio: f64,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub cost: f64,
    /// Fixed RBF width; by default derived from the median distance.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub gamma_scale: f64,
    /// Pick cost and width scale on the validation split.
    #[arg(long)]
    pub grid: bool,
    #[arg(long, requires = "grid")]
    pub grid_report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub features: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Adds a `kept` column: score strictly above the threshold.
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoleArg {
    Train,
    Test,
    Validation,
    All,
}

#[derive(Debug, Args)]
pub struct RocArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = RoleArg::Test)]
    pub role: RoleArg,
    #[arg(long, default_value_t = 100)]
    pub nthresholds: usize,
    /// Signal efficiency the operating threshold must keep.
    #[arg(long, default_value_t = 0.9)]
    pub target: f64,
    /// Operating threshold summary (JSON).
    #[arg(long)]
    pub threshold_out: Option<PathBuf>,
    /// Test-versus-validation compatibility table.
    #[arg(long)]
    pub compare_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Tweets to rate (JSONL).
    #[arg(long)]
    pub tasks: PathBuf,
    #[arg(long)]
    pub log: PathBuf,
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    #[arg(long, default_value_t = 100, requires = "snapshot")]
    pub snapshot_every: usize,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    /// Accepted rater ids; any id is accepted when none is given.
    #[arg(long = "rater")]
    pub raters: Vec<String>,
    #[arg(long)]
    pub ui_dir: Option<PathBuf>,
    /// Send disagreements to a third rater.
    #[arg(long)]
    pub third_rater: bool,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub tasks: PathBuf,
    #[arg(long)]
    pub log: PathBuf,
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long)]
    pub third_rater: bool,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[arg(long)]
    pub labels: PathBuf,
    /// `tweet_id,effect` tags.
    #[arg(long)]
    pub effects: Option<PathBuf>,
    /// Drug lexicon (default: bundled).
    #[arg(long)]
    pub drugs: Option<PathBuf>,
    /// Effect vocabulary (default: bundled).
    #[arg(long)]
    pub effect_vocab: Option<PathBuf>,
    #[arg(long)]
    pub exclude_retweets: bool,
    #[arg(long)]
    pub require_side_effects: bool,
    #[arg(long)]
    pub unique_users: bool,
    /// First day of bin 0.
    #[arg(long, default_value = "2010-09-09")]
    pub origin: String,
    #[arg(long, default_value = "2013-08-28")]
    pub end: String,
    #[arg(long, default_value_t = 60)]
    pub bin_days: u32,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Drug mentions per bin: `drug,bin_start,count`.
    Mentions(StudyArgs),
    /// Drug/effect pairs by unique user: `drug,effect,users`.
    Effects {
        #[command(flatten)]
        study: StudyArgs,
        /// Mentions per drug (`drug,mentions`).
        #[arg(long)]
        totals: Option<PathBuf>,
    },
    /// Sentiment sums per bin: `bin_start,psi,n,sigma`.
    Sentiment {
        #[command(flatten)]
        study: StudyArgs,
        #[arg(long)]
        drug: Option<String>,
        /// Per-bin z = psi/sigma (`bin_start,z,compatible`).
        #[arg(long)]
        neutrality: Option<PathBuf>,
    },
    /// Correlation between per-bin sentiment and drug mentions (JSON).
    Correlation(StudyArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub tweets: usize,
    /// Probability the second rater matches the first.
    #[arg(long, default_value_t = 0.8)]
    pub match_prob: f64,
}

fn run(cli: Cli) -> CliResult<()> {
    commands::dispatch(cli)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
