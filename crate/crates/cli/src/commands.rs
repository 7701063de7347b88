use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use metatrust_core::attribute::{
    intrinsic_consistency_lint, parse_sidecar, validate, Finding, SidecarFormat, Violation, DEFAULT_LINT_TOLERANCE,
};
use metatrust_core::delta::{Channel, NormalizationBounds};
use metatrust_core::eval::corpus::{read_jsonl, write_jsonl};
use metatrust_core::eval::seed::derive_seed;
use metatrust_core::eval::{
    baseline_comparison, benchmark_runtime, mutate, paraphrase_corpus, parallel_planes, pattern_corpus,
    plane_sweep, planar_corpus, split, uniform_points, unmodified_corpus, Corpus, EvaluationReport, Magnitude,
    MutationPlan, PlanarConfig,
};
use metatrust_core::intention::{
    pair_deltas, pair_records, ChannelSpaces, Embedding, KMeansConfig, Strategy, TrainConfig,
};
use metatrust_core::lsa::{RankRule, Weighting};
use metatrust_core::{ContextProfile, ImageServiceRecord, ModelBundle};
use serde::Serialize;

use crate::args::*;
use crate::error::{model_error, CliError, CliResult};

/// Writes `text` to `path`, or to stdout when there is no path.
fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::internal(format!("{}: {e}", dir.display())))?;
            }
            fs::write(p, text).map_err(|e| CliError::internal(format!("{}: {e}", p.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::internal(format!("stdout: {e}")))
        }
    }
}

fn jsonl<T: Serialize>(items: &[T]) -> String {
    let mut s = String::new();
    for item in items {
        s.push_str(&serde_json::to_string(item).expect("serializable"));
        s.push('\n');
    }
    s
}

fn read_corpus(dir: &Path) -> CliResult<Corpus> {
    Corpus::read_dir(dir).map_err(|e| CliError::from(e).context(dir.display()))
}

pub fn train_config(pipeline: &PipelineArgs, seed: u64, planes: Option<usize>) -> TrainConfig {
    TrainConfig {
        plane_count: planes,
        policy: pipeline.channel_policy.into(),
        normalization: pipeline.normalization.into(),
        rank_rule: pipeline.rank.map(RankRule::Fixed).unwrap_or_default(),
        weighting: if pipeline.tfidf {
            Weighting::TfIdf
        } else {
            Weighting::TermFrequency
        },
        seed,
        kmeans: KMeansConfig::with_seed(seed),
        ..TrainConfig::default()
    }
}

fn strategies(chosen: &[StrategyArg]) -> Vec<Strategy> {
    if chosen.is_empty() {
        Strategy::ALL.to_vec()
    } else {
        chosen.iter().map(|&s| s.into()).collect()
    }
}

#[derive(Debug, Serialize)]
struct Skipped {
    file: String,
    error: String,
}

#[derive(Debug, Serialize)]
struct RecordViolation {
    id: String,
    tag: String,
    message: String,
    #[serde(flatten)]
    violation: Violation,
}

#[derive(Debug, Serialize)]
struct RecordFinding {
    id: String,
    #[serde(flatten)]
    finding: Finding,
}

#[derive(Debug, Serialize)]
struct IngestReport {
    corpus: String,
    records: usize,
    skipped: Vec<Skipped>,
    violations: Vec<RecordViolation>,
    findings: Vec<RecordFinding>,
}

pub fn cmd_ingest(args: &IngestArgs) -> CliResult<()> {
    let (format, ext) = match args.format {
        SidecarArg::Json => (SidecarFormat::JsonSidecar, "json"),
        SidecarArg::Csv => (SidecarFormat::CsvRow, "csv"),
    };
    let entries = fs::read_dir(&args.input).map_err(|e| CliError::input(format!("{}: {e}", args.input.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == ext))
        .collect();
    files.sort();

    let mut records: Vec<ImageServiceRecord> = Vec::new();
    let mut skipped = Vec::new();
    for file in &files {
        let parsed = fs::read(file)
            .map_err(metatrust_core::Error::from)
            .and_then(|bytes| parse_sidecar(&bytes, format));
        match parsed {
            Ok(r) => records.push(r),
            Err(e) if args.strict => return Err(CliError::from(e).context(file.display())),
            Err(e) => {
                log::warn!("skipping {}: {e}", file.display());
                skipped.push(Skipped {
                    file: file.display().to_string(),
                    error: e.to_string(),
                });
            }
        }
    }
    records.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(w) = records.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(metatrust_core::Error::DuplicateId(w[0].id.clone()).into());
    }

    let mut violations = Vec::new();
    let mut findings = Vec::new();
    for r in &records {
        for v in validate(r) {
            violations.push(RecordViolation {
                id: r.id.clone(),
                tag: v.tag().to_string(),
                message: v.to_string(),
                violation: v,
            });
        }
        for f in intrinsic_consistency_lint(r, DEFAULT_LINT_TOLERANCE) {
            findings.push(RecordFinding {
                id: r.id.clone(),
                finding: f,
            });
        }
    }
    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::internal(format!("{}: {e}", dir.display())))?;
    }
    write_jsonl(&args.out, &records).map_err(|e| CliError::internal(e.to_string()))?;
    let report = IngestReport {
        corpus: args.out.display().to_string(),
        records: records.len(),
        skipped,
        violations,
        findings,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("serializable");
    text.push('\n');
    emit(args.report.as_deref(), &text)
}

#[derive(Debug, Serialize)]
struct DiffRow<'a> {
    id: &'a str,
    original: &'a str,
    raw: metatrust_core::DeltaVector,
    normalized: metatrust_core::NormalizedDelta,
}

pub fn cmd_diff(args: &DiffArgs, seed: u64) -> CliResult<()> {
    let corpus = read_corpus(&args.corpus)?;
    let pairs = corpus.pairs()?;
    let config = train_config(&args.pipeline, seed, None);
    let spaces = ChannelSpaces::fit(
        &pair_records(&pairs),
        config.policy,
        config.weighting,
        config.rank_rule,
        Embedding::Lsa,
    )?;
    let raw = pairs
        .iter()
        .map(|p| pair_deltas(p, config.policy, &spaces))
        .collect::<Result<Vec<_>, _>>()?;
    let bounds = NormalizationBounds::fit(&raw, config.normalization)?;
    let rows: Vec<DiffRow> = pairs
        .iter()
        .zip(&raw)
        .map(|(p, d)| DiffRow {
            id: &p.candidate.id,
            original: &p.original.id,
            raw: *d,
            normalized: bounds.apply(d),
        })
        .collect();
    emit(args.out.as_deref(), &jsonl(&rows))
}

pub fn cmd_train(args: &TrainArgs, seed: u64) -> CliResult<()> {
    let corpus = read_corpus(&args.corpus)?;
    let (pairs, labels) = corpus.labeled_pairs()?;
    let bundle = ModelBundle::train(&pairs, &labels, &train_config(&args.pipeline, seed, args.planes))?;
    log::info!(
        "trained {} planes on {} pairs (regression training accuracy {:.3})",
        bundle.intention.planes.len(),
        pairs.len(),
        bundle.intention.theta_training_accuracy
    );
    emit(Some(&args.out), &bundle.to_json())
}

pub fn load_profile(spec: &str) -> CliResult<ContextProfile> {
    match ContextProfile::builtin(spec) {
        Some(p) => Ok(p),
        None => ContextProfile::load(Path::new(spec)).map_err(|e| model_error(e).context(spec)),
    }
}

pub fn cmd_score(args: &ScoreArgs) -> CliResult<()> {
    let bundle = ModelBundle::load(&args.model).map_err(|e| model_error(e).context(args.model.display()))?;
    let profile = load_profile(&args.profile)?;
    let corpus = read_corpus(&args.corpus)?;
    let pairs = corpus.pairs()?;
    let reports = bundle.score(&pairs, &profile, args.strategy.into())?;
    emit(args.out.as_deref(), &jsonl(&reports))
}

pub fn cmd_evaluate(args: &EvaluateArgs, seed: u64) -> CliResult<()> {
    let corpus = match &args.corpus {
        Some(dir) => read_corpus(dir)?,
        None => planar_corpus(&PlanarConfig {
            per_level: args.per_level,
            noise: args.noise,
            seed,
            ..PlanarConfig::default()
        })?,
    };
    let (pairs, labels) = corpus.labeled_pairs()?;
    let (train_p, test_p) = split(&pairs, args.holdout);
    let (train_l, test_l) = split(&labels, args.holdout);
    let config = train_config(&args.pipeline, seed, None);
    let strategies = strategies(&args.strategy);
    let sweep = plane_sweep((&train_p, &train_l), (&test_p, &test_l), &args.planes, &strategies, &config)?;
    let baseline = match (args.baseline, args.planes.iter().max()) {
        (true, Some(&p)) => baseline_comparison((&train_p, &train_l), (&test_p, &test_l), p, &strategies, &config)?,
        _ => Vec::new(),
    };
    let report = EvaluationReport {
        seed,
        sweep,
        runtime: Vec::new(),
        baseline,
    };
    match &args.out {
        Some(dir) => {
            emit(Some(&dir.join("report.json")), &report.to_json())?;
            emit(Some(&dir.join("sweep.csv")), &report.sweep_csv())?;
            if !report.baseline.is_empty() {
                emit(Some(&dir.join("baseline.csv")), &report.baseline_csv())?;
            }
            Ok(())
        }
        None => {
            let mut text = report.sweep_csv();
            if !report.baseline.is_empty() {
                text.push('\n');
                text.push_str(&report.baseline_csv());
            }
            emit(None, &text)
        }
    }
}

pub fn cmd_bench(args: &BenchArgs, seed: u64) -> CliResult<()> {
    if args.records == 0 || args.planes == 0 {
        return Err(CliError::input("--records and --planes must be positive"));
    }
    let points = uniform_points(args.records, seed);
    let planes = parallel_planes(args.planes);
    let kmeans = KMeansConfig {
        k: args.k,
        ..KMeansConfig::with_seed(seed)
    };
    let runtime = benchmark_runtime(&points, &planes, &strategies(&args.strategy), &kmeans, args.runs)?;
    let report = EvaluationReport {
        seed,
        runtime,
        ..EvaluationReport::default()
    };
    emit(args.out.as_deref(), &report.runtime_csv())
}

fn magnitude(m: MagnitudeArg) -> Magnitude {
    match m {
        MagnitudeArg::Minor => Magnitude::Minor,
        MagnitudeArg::Major => Magnitude::Major,
    }
}

pub fn cmd_mutate(args: &MutateArgs, seed: u64) -> CliResult<()> {
    let corpus = match &args.input {
        Some(path) => {
            let originals = read_jsonl(path).map_err(|e| CliError::from(e).context(path.display()))?;
            let chosen = [
                (Channel::Spatial, args.spatial),
                (Channel::Temporal, args.temporal),
                (Channel::Contextual, args.contextual),
            ];
            if chosen.iter().all(|(_, m)| m.is_none()) {
                return Err(CliError::input(
                    "a plan needs at least one of --spatial, --temporal, --contextual",
                ));
            }
            let mut candidates = Vec::with_capacity(originals.len());
            let mut labels = std::collections::BTreeMap::new();
            for (i, original) in originals.iter().enumerate() {
                let mut plan = MutationPlan::new(derive_seed(seed, i as u64));
                for (channel, m) in chosen {
                    if let Some(m) = m {
                        plan = plan.with(channel, magnitude(m));
                    }
                }
                let (candidate, label) = mutate(original, &plan)?;
                labels.insert(candidate.id.clone(), label);
                candidates.push(candidate);
            }
            Corpus {
                originals,
                candidates,
                labels,
                manifest: None,
            }
        }
        None => match args.kind {
            CorpusKind::Planar => planar_corpus(&PlanarConfig {
                per_level: args.count,
                noise: args.noise,
                seed,
                ..PlanarConfig::default()
            })?,
            CorpusKind::Pattern => pattern_corpus(args.count, seed)?,
            CorpusKind::Paraphrase => paraphrase_corpus(args.count, seed)?,
            CorpusKind::Unmodified => unmodified_corpus(args.count, seed)?,
        },
    };
    corpus
        .write_dir(&args.out)
        .map_err(|e| CliError::internal(format!("{}: {e}", args.out.display())))?;
    log::info!("wrote {} pairs to {}", corpus.candidates.len(), args.out.display());
    Ok(())
}
