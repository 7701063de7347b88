use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metatrust_core::delta::NormalizationMode;
use metatrust_core::intention::{ChannelPolicy, Strategy};

/// Seed used when neither `--seed` nor `METATRUST_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_240_521;

#[derive(Debug, Parser)]
#[command(name = "metatrust", version, about = "Estimate intention and fakeness of image metadata changes")]
pub struct Cli {
    /// Master seed for every randomized step.
    #[arg(long, global = true, env = "METATRUST_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Log more (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a directory of sidecars into a JSON-lines corpus and report violations.
    Ingest(IngestArgs),
    /// Per-pair raw and normalized deltas.
    Diff(DiffArgs),
    /// Fit an intention model on a labeled corpus.
    Train(TrainArgs),
    /// Score a corpus with a trained model under a context profile.
    Score(ScoreArgs),
    /// Accuracy and precision across plane counts and strategies.
    Evaluate(EvaluateArgs),
    /// Per-record scoring time of each assignment strategy.
    Bench(BenchArgs),
    /// Generate a mutated corpus.
    Mutate(MutateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Brute,
    Heur,
    Cluster,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Brute => Strategy::BruteForce,
            StrategyArg::Heur => Strategy::Heuristic,
            StrategyArg::Cluster => Strategy::Clustered,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    PerChannel,
    /// One min and max pooled over all three channels.
    Paper,
}

impl From<NormalizationArg> for NormalizationMode {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::PerChannel => NormalizationMode::PerChannel,
            NormalizationArg::Paper => NormalizationMode::Pooled,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    /// Quantitative spatial and temporal, semantic contextual.
    Default,
    Quantitative,
    Semantic,
}

impl From<PolicyArg> for ChannelPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Default => ChannelPolicy::Default,
            PolicyArg::Quantitative => ChannelPolicy::Quantitative,
            PolicyArg::Semantic => ChannelPolicy::Semantic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SidecarArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusKind {
    /// Candidates spread around one parallel plane per level.
    Planar,
    /// Random minor/major plans labeled by the pattern table.
    Pattern,
    /// Synonym paraphrases vs topic swaps of the caption.
    Paraphrase,
    /// Candidates identical to their originals.
    Unmodified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MagnitudeArg {
    Minor,
    Major,
}

/// Options shared by commands that build deltas.
#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    #[arg(long, value_enum, default_value_t = PolicyArg::Default)]
    pub channel_policy: PolicyArg,

    #[arg(long, value_enum, default_value_t = NormalizationArg::PerChannel)]
    pub normalization: NormalizationArg,

    /// Fixed LSA rank; by default the rank keeping 90% of singular-value energy.
    #[arg(long)]
    pub rank: Option<usize>,

    /// Weight LSA term counts by tf-idf.
    #[arg(long)]
    pub tfidf: bool,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Directory of sidecar files.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t = SidecarArg::Json)]
    pub format: SidecarArg,

    /// Corpus file (JSON lines) to write.
    #[arg(long)]
    pub out: PathBuf,

    /// Validation report path; stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,

    /// Fail on the first malformed file instead of skipping it.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct DiffArgs {
    /// Corpus directory (originals.jsonl, candidates.jsonl).
    #[arg(long)]
    pub corpus: PathBuf,

    #[command(flatten)]
    pub pipeline: PipelineArgs,

    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Labeled corpus directory.
    #[arg(long)]
    pub corpus: PathBuf,

    /// Model file to write.
    #[arg(long)]
    pub out: PathBuf,

    /// Number of intention planes; every labeled level when omitted.
    #[arg(long)]
    pub planes: Option<usize>,

    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Corpus directory to score.
    #[arg(long)]
    pub corpus: PathBuf,

    /// Model file written by `train`.
    #[arg(long)]
    pub model: PathBuf,

    /// Built-in profile name (general, road-accident, public-gathering) or a profile file.
    #[arg(long, default_value = "general")]
    pub profile: String,

    #[arg(long, value_enum, default_value_t = StrategyArg::Brute)]
    pub strategy: StrategyArg,

    /// Reports (JSON lines); stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Labeled corpus directory; a planar corpus is generated from the seed when omitted.
    #[arg(long)]
    pub corpus: Option<PathBuf>,

    /// Records per level for the generated corpus.
    #[arg(long, default_value_t = 250)]
    pub per_level: usize,

    /// Noise of the generated corpus.
    #[arg(long, default_value_t = 0.08)]
    pub noise: f64,

    /// Plane counts to sweep, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4])]
    pub planes: Vec<usize>,

    /// Strategies, comma separated; all when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub strategy: Vec<StrategyArg>,

    /// Every n-th pair is held out for testing.
    #[arg(long, default_value_t = 5)]
    pub holdout: usize,

    /// Also run the tf-idf baseline at the largest plane count.
    #[arg(long)]
    pub baseline: bool,

    #[command(flatten)]
    pub pipeline: PipelineArgs,

    /// Directory for report.json and the CSV tables; CSV to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 10_000)]
    pub records: usize,

    #[arg(long, default_value_t = 8)]
    pub planes: usize,

    /// Cluster count; ceil(sqrt(records / 2)) when omitted.
    #[arg(long)]
    pub k: Option<usize>,

    #[arg(long, default_value_t = 5)]
    pub runs: usize,

    /// Strategies, comma separated; all when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub strategy: Vec<StrategyArg>,

    /// CSV table; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MutateArgs {
    /// Output corpus directory.
    #[arg(long)]
    pub out: PathBuf,

    #[arg(long, value_enum, default_value_t = CorpusKind::Planar)]
    pub kind: CorpusKind,

    /// Records to generate (per level for planar corpora).
    #[arg(long, default_value_t = 100)]
    pub count: usize,

    #[arg(long, default_value_t = 0.08)]
    pub noise: f64,

    /// Mutate these originals (JSON lines) with one plan instead of generating a corpus.
    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub spatial: Option<MagnitudeArg>,

    #[arg(long, value_enum)]
    pub temporal: Option<MagnitudeArg>,

    #[arg(long, value_enum)]
    pub contextual: Option<MagnitudeArg>,
}
