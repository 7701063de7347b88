//! Acceptance suite: one line per criterion, nonzero exit if any fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::Parser;
use metatrust_cli::{run, Cli};
use metatrust_core::attribute::TimePoint;
use metatrust_core::delta::{contextual_distance, contextual_jaccard, haversine_km, temporal_manhattan, Channel, EARTH_RADIUS_KM};
use metatrust_core::eval::{
    baseline_comparison, benchmark_runtime, paraphrase_corpus, parallel_planes, plane_sweep, planar_corpus, split,
    uniform_points, unmodified_corpus, PlanarConfig, SweepRow,
};
use metatrust_core::intention::{
    default_k, fit_planes, point_plane_distance, Embedding, IntentionLevel, IntentionPlane, KMeansConfig, Strategy,
    TrainConfig,
};
use metatrust_core::linalg::{Matrix, Svd};
use metatrust_core::lsa::{RankRule, SemanticSpace, VectorizerConfig, Weighting};
use metatrust_core::{ContextProfile, ModelBundle, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const SEED: u64 = 20_240_521;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Great-circle distance by the atan2 (Vincenty, sphere) form.
fn oracle_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (p1, p2) = (a.0.to_radians(), b.0.to_radians());
    let dl = (b.1 - a.1).to_radians();
    let y = ((p2.cos() * dl.sin()).powi(2) + (p1.cos() * p2.sin() - p1.sin() * p2.cos() * dl.cos()).powi(2)).sqrt();
    let x = p1.sin() * p2.sin() + p1.cos() * p2.cos() * dl.cos();
    EARTH_RADIUS_KM * y.atan2(x)
}

fn random_time(rng: &mut ChaCha8Rng) -> TimePoint {
    TimePoint::new(
        rng.gen_range(1990..2030),
        rng.gen_range(1..=12),
        rng.gen_range(1..=28),
        rng.gen_range(0..24),
        rng.gen_range(0..60),
        rng.gen_range(0..60),
    )
    .expect("valid calendar time")
}

fn random_set(rng: &mut ChaCha8Rng) -> BTreeSet<u8> {
    let n = rng.gen_range(0..8);
    (0..n).map(|_| rng.gen_range(0..12)).collect()
}

fn metrics() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let a = (rng.gen_range(-90.0..=90.0), rng.gen_range(-180.0..=180.0));
        let b = (rng.gen_range(-90.0..=90.0), rng.gen_range(-180.0..=180.0));
        worst = worst.max((haversine_km(a, b) - oracle_distance(a, b)).abs());
    }
    ensure!(worst <= 1e-6, "haversine off oracle by {worst:e} km");
    let syd_mel = haversine_km((-33.8688, 151.2093), (-37.8136, 144.9631));
    ensure!((syd_mel - 713.4).abs() <= 1.0, "Sydney-Melbourne {syd_mel}");
    let antipodal = haversine_km((0.0, 0.0), (0.0, 180.0));
    ensure!(antipodal == PI * 6371.0, "antipodal {antipodal}");

    for _ in 0..10_000 {
        let (a, b, c) = (random_time(&mut rng), random_time(&mut rng), random_time(&mut rng));
        let ab = temporal_manhattan(&a, &b);
        ensure!(ab >= 0.0 && temporal_manhattan(&a, &a) == 0.0, "manhattan identity/sign");
        ensure!(ab == temporal_manhattan(&b, &a), "manhattan symmetry");
        ensure!(ab <= temporal_manhattan(&a, &c) + temporal_manhattan(&c, &b), "manhattan triangle");
        ensure!((ab == 0.0) == (a.components() == b.components()), "manhattan separation");

        let (x, y, z) = (random_set(&mut rng), random_set(&mut rng), random_set(&mut rng));
        let j = contextual_jaccard(&x, &y);
        ensure!((0.0..=1.0).contains(&j), "jaccard range {j}");
        ensure!(j == contextual_jaccard(&y, &x) && contextual_jaccard(&x, &x) == 1.0, "jaccard symmetry/identity");
        let dxy = contextual_distance(&x, &y);
        ensure!(
            dxy <= contextual_distance(&x, &z) + contextual_distance(&z, &y) + 1e-12,
            "jaccard distance triangle"
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("haversine max err {worst:.1e} km, Syd-Mel {syd_mel:.1} km, 10k property cases, {elapsed:.2?}"))
}

fn max_abs(m: &Matrix) -> f64 {
    m.data().iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

fn lsa() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let vocab: Vec<String> = (0..10).map(|i| format!("t{i}")).collect();
    let (mut rec, mut orth, mut trunc, mut fold) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..100 {
        let data: Vec<f64> = (0..200).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let m = Matrix::from_vec(20, 10, data.clone()).expect("20x10");
        let svd = Svd::compute(&m);
        rec = rec.max(m.sub(&svd.reconstruct(10)).frobenius());
        let utu = svd.u.transpose().matmul(&svd.u).sub(&Matrix::identity(10));
        let vtv = svd.v.transpose().matmul(&svd.v).sub(&Matrix::identity(10));
        orth = orth.max(max_abs(&utu)).max(max_abs(&vtv));

        let oracle = nalgebra::DMatrix::from_row_slice(20, 10, &data).singular_values();
        let mut sigma: Vec<f64> = oracle.iter().copied().collect();
        sigma.sort_by(|a, b| b.total_cmp(a));
        let r = rng.gen_range(1..10);
        let best: f64 = sigma[r..].iter().map(|s| s * s).sum::<f64>().sqrt();
        trunc = trunc.max((m.sub(&svd.reconstruct(r)).frobenius() - best).abs());

        let config = VectorizerConfig::with_vocabulary(Channel::Contextual, Weighting::TermFrequency, vocab.clone())
            .map_err(|e| e.to_string())?;
        for rank in [10, r] {
            let space = SemanticSpace::fit(&m, RankRule::Fixed(rank), config.clone()).map_err(|e| e.to_string())?;
            for i in 0..20 {
                let v = space.embed(m.row(i)).map_err(|e| e.to_string())?;
                for k in 0..rank {
                    fold = fold.max((v.0[k] - space.u[(i, k)]).abs());
                }
            }
        }
    }
    ensure!(rec <= 1e-8, "reconstruction error {rec:e}");
    ensure!(orth <= 1e-8, "orthonormality error {orth:e}");
    ensure!(trunc <= 1e-9, "truncated error off oracle by {trunc:e}");
    ensure!(fold <= 1e-8, "fold-in error {fold:e}");
    Ok(format!("recon {rec:.1e}, orth {orth:.1e}, truncation {trunc:.1e}, fold-in {fold:.1e}"))
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn planes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_angle = 0.0_f64;
    for _ in 0..50 {
        let mut labeled = Vec::new();
        let mut truth = Vec::new();
        for level in IntentionLevel::ALL {
            let n = unit([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            let d: f64 = rng.gen_range(-1.0..1.0);
            let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
            let e1 = unit(cross(n, helper));
            let e2 = cross(n, e1);
            for _ in 0..20 {
                let (s, t): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                labeled.push((std::array::from_fn(|i| -d * n[i] + s * e1[i] + t * e2[i]), level));
            }
            truth.push(n);
        }
        let fits = fit_planes(&labeled).map_err(|e| e.to_string())?;
        for (fit, n) in fits.iter().zip(&truth) {
            let m = fit.plane.normal();
            let angle = dot(cross(m, *n), cross(m, *n)).sqrt().atan2(dot(m, *n).abs());
            worst_angle = worst_angle.max(angle);
        }
    }
    ensure!(worst_angle <= 1e-6, "normal angle {worst_angle:e} rad");

    let mut worst_dist = 0.0_f64;
    for _ in 0..1000 {
        let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let p: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let plane = IntentionPlane {
            a: c[0],
            b: c[1],
            c: c[2],
            d: c[3],
            level: IntentionLevel::BorderLine,
        };
        let hand = ((c[0] * p[0] + c[1] * p[1]) + (c[2] * p[2] + c[3])).abs() / c[0].hypot(c[1]).hypot(c[2]);
        let got = point_plane_distance(p, &plane);
        worst_dist = worst_dist.max((got - hand).abs());
        for k in [2.0, 0.5, 1024.0, -4.0, 2f64.powi(-20)] {
            let scaled = IntentionPlane {
                a: k * c[0],
                b: k * c[1],
                c: k * c[2],
                d: k * c[3],
                ..plane.clone()
            };
            ensure!(point_plane_distance(p, &scaled) == got, "distance changed under scaling by {k}");
        }
    }
    ensure!(worst_dist <= 1e-12, "distance off hand oracle by {worst_dist:e}");
    Ok(format!("normal angle {worst_angle:.1e} rad, distance err {worst_dist:.1e}, scaling exact"))
}

fn accuracy_of(rows: &[SweepRow], planes: usize, strategy: Strategy) -> f64 {
    rows.iter()
        .find(|r| r.planes == planes && r.strategy == strategy)
        .map(|r| r.accuracy)
        .expect("row present")
}

fn planar_sweep(plane_counts: &[usize], strategies: &[Strategy]) -> Result<Vec<SweepRow>, String> {
    let corpus = planar_corpus(&PlanarConfig {
        seed: SEED,
        ..PlanarConfig::default()
    })
    .map_err(|e| e.to_string())?;
    let (pairs, labels) = corpus.labeled_pairs().map_err(|e| e.to_string())?;
    let (train_p, test_p) = split(&pairs, 5);
    let (train_l, test_l) = split(&labels, 5);
    let config = TrainConfig {
        seed: SEED,
        kmeans: KMeansConfig::with_seed(SEED),
        ..TrainConfig::default()
    };
    plane_sweep((&train_p, &train_l), (&test_p, &test_l), plane_counts, strategies, &config).map_err(|e| e.to_string())
}

fn ordering() -> Outcome {
    let start = Instant::now();
    let rows = planar_sweep(&[4], &Strategy::ALL)?;
    let elapsed = start.elapsed();
    let [b, h, c] = Strategy::ALL.map(|s| accuracy_of(&rows, 4, s));
    ensure!(b >= h && h >= c, "ordering broken: brute {b:.3}, heur {h:.3}, cluster {c:.3}");
    ensure!(b >= 0.80, "brute accuracy {b:.3}");
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!("brute {b:.3} >= heur {h:.3} >= cluster {c:.3}, {elapsed:.2?}"))
}

fn plane_trend() -> Outcome {
    let rows = planar_sweep(&[2, 3, 4], &[Strategy::BruteForce])?;
    let acc: Vec<f64> = [2, 3, 4].map(|p| accuracy_of(&rows, p, Strategy::BruteForce)).to_vec();
    ensure!(acc[0] <= acc[1] && acc[1] <= acc[2], "not monotone: {acc:?}");
    ensure!(acc[2] > acc[0], "4 planes not above 2: {acc:?}");
    Ok(format!("2/3/4 planes: {:.3} / {:.3} / {:.3}", acc[0], acc[1], acc[2]))
}

fn runtime() -> Outcome {
    let n = 10_000;
    let points = uniform_points(n, SEED);
    let planes = parallel_planes(8);
    let k = default_k(n);
    ensure!(k == 71, "k = {k}");
    let kmeans = KMeansConfig {
        k: Some(k),
        ..KMeansConfig::with_seed(SEED)
    };
    let rows = benchmark_runtime(&points, &planes, &Strategy::ALL, &kmeans, 5).map_err(|e| e.to_string())?;
    let [b, h, c] = [0, 1, 2].map(|i| rows[i].ns_per_record);
    ensure!(b >= 10.0 * c, "clustered only {:.1}x faster", b / c);
    ensure!(h <= 1.10 * b, "heuristic {h:.1} ns vs brute {b:.1} ns");
    Ok(format!("brute {b:.1} ns, heur {h:.1} ns, cluster {c:.2} ns per record ({:.0}x)", b / c))
}

fn baseline() -> Outcome {
    let corpus = paraphrase_corpus(400, SEED).map_err(|e| e.to_string())?;
    let (pairs, labels) = corpus.labeled_pairs().map_err(|e| e.to_string())?;
    let (train_p, test_p) = split(&pairs, 5);
    let (train_l, test_l) = split(&labels, 5);
    let config = TrainConfig {
        rank_rule: RankRule::Fixed(5),
        weighting: Weighting::TfIdf,
        seed: SEED,
        ..TrainConfig::default()
    };
    let rows = baseline_comparison((&train_p, &train_l), (&test_p, &test_l), 2, &[Strategy::BruteForce], &config)
        .map_err(|e| e.to_string())?;
    let get = |e: Embedding| rows.iter().find(|r| r.embedding == e).map(|r| r.accuracy).expect("row");
    let (lsa, tfidf) = (get(Embedding::Lsa), get(Embedding::Raw));
    ensure!(lsa - tfidf >= 0.10, "LSA {lsa:.3} vs tf-idf {tfidf:.3}");
    Ok(format!("LSA {lsa:.3} vs tf-idf {tfidf:.3} (+{:.1} pp)", 100.0 * (lsa - tfidf)))
}

fn cli(args: &[&str]) -> Result<(), String> {
    let cli = Cli::try_parse_from(std::iter::once("metatrust").chain(args.iter().copied())).map_err(|e| e.to_string())?;
    run(&cli).map_err(|e| e.to_string())
}

fn golden() -> Outcome {
    let f = fixtures();
    let sample = f.join("sample");
    let want_model = fs::read(f.join("golden/model.json")).map_err(|e| e.to_string())?;
    let want_scores = fs::read(f.join("golden/scores.jsonl")).map_err(|e| e.to_string())?;
    for attempt in 1..=2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let model = dir.path().join("model.json");
        let scores = dir.path().join("scores.jsonl");
        let s = |p: &Path| p.to_str().expect("utf-8 path").to_string();
        cli(&["--seed", "7", "train", "--corpus", &s(&sample), "--out", &s(&model)])?;
        cli(&["score", "--corpus", &s(&sample), "--model", &s(&model), "--out", &s(&scores)])?;
        ensure!(fs::read(&model).ok() == Some(want_model.clone()), "run {attempt}: model differs from golden");
        ensure!(fs::read(&scores).ok() == Some(want_scores.clone()), "run {attempt}: scores differ from golden");
    }
    Ok(format!("model ({} B) and scores ({} B) identical on 2 runs", want_model.len(), want_scores.len()))
}

fn anchor() -> Outcome {
    let f = fixtures();
    let bundle = ModelBundle::load(&f.join("golden/model.json")).map_err(|e| e.to_string())?;
    let profile = ContextProfile::general();
    let mut pairs = metatrust_core::eval::Corpus::read_dir(&f.join("unmodified"))
        .and_then(|c| c.pairs())
        .map_err(|e| e.to_string())?;
    pairs.extend(unmodified_corpus(200, SEED).and_then(|c| c.pairs()).map_err(|e| e.to_string())?);
    let mut count = 0;
    for strategy in Strategy::ALL {
        let reports = bundle.score(&pairs, &profile, strategy).map_err(|e| e.to_string())?;
        for r in &reports {
            ensure!(
                r.intention == IntentionLevel::WellIntention && r.verdict == Verdict::Trustworthy,
                "{} scored {} / {:?} with {strategy}",
                r.record_id,
                r.intention,
                r.verdict
            );
        }
        count = reports.len();
    }
    Ok(format!("{count} unmodified pairs well-intention and trustworthy under every strategy"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("metric correctness", metrics),
        ("LSA correctness", lsa),
        ("plane machinery", planes),
        ("classification ordering", ordering),
        ("plane-count trend", plane_trend),
        ("runtime trend", runtime),
        ("baseline direction", baseline),
        ("end-to-end determinism", golden),
        ("zero-delta anchor", anchor),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (status, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {:<24} {status}  {detail}", i + 1, name);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
