//! Synthetic corpora, mutation, metrics and runtime measurement.

pub mod bench;
pub mod corpus;
pub mod experiment;
pub mod lexicon;
pub mod metrics;
pub mod mutate;
pub mod report;
pub mod seed;

pub use bench::{benchmark_runtime, parallel_planes, uniform_points, RuntimeRow};
pub use corpus::{
    paraphrase_corpus, pattern_corpus, planar_corpus, unmodified_corpus, Corpus, Manifest, PlanarConfig,
};
pub use experiment::{baseline_comparison, plane_sweep, split, BaselineRow, SweepRow};
pub use metrics::{accuracy, evaluate_accuracy, evaluate_precision, precision_ill, AccuracyReport, ConfusionMatrix};
pub use mutate::{classify_pattern, mutate, pattern_level, Magnitude, MutationPlan};
pub use report::EvaluationReport;
pub use seed::{seed_record, seed_records};
