use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::intention::{
    nearest_plane, Assignment, ClusteredAssigner, HeuristicIndex, IntentionLevel, IntentionPlane, KMeansConfig,
    Strategy,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeRow {
    pub strategy: Strategy,
    /// Median over runs.
    pub ns_per_record: f64,
    pub runs: Vec<f64>,
}

/// `count` parallel planes evenly spread across the unit cube along the
/// severity direction; levels cycle through the spectrum.
pub fn parallel_planes(count: usize) -> Vec<IntentionPlane> {
    let n = [0.3, 0.2, 0.5];
    (0..count)
        .map(|i| {
            let s = (i as f64 + 0.5) / count as f64;
            let level = IntentionLevel::ALL[(i * 5 / count.max(1)).min(4)];
            IntentionPlane::new(n[0], n[1], n[2], -s, level).expect("nonzero normal")
        })
        .collect()
}

pub fn uniform_points(count: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| [rng.gen(), rng.gen(), rng.gen()]).collect()
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Shortest wall time of one timed run; short passes are repeated until a
/// run lasts at least this long.
const MIN_RUN: Duration = Duration::from_millis(20);

/// Per-record nanoseconds of `runs` timed runs of `pass`, after one warm-up
/// pass that also sets the repetition count.
fn time_runs(runs: usize, records: usize, mut pass: impl FnMut()) -> Vec<f64> {
    let start = Instant::now();
    pass();
    let once = start.elapsed().max(Duration::from_nanos(1));
    let reps = (MIN_RUN.as_nanos() / once.as_nanos()).clamp(1, 10_000) as u32;
    (0..runs)
        .map(|_| {
            let start = Instant::now();
            for _ in 0..reps {
                pass();
            }
            start.elapsed().as_nanos() as f64 / (reps as f64 * records as f64)
        })
        .collect()
}

/// Times the scoring phase of each strategy. Heuristic ordering and
/// clustering are built once, outside the timed region.
pub fn benchmark_runtime(
    points: &[[f64; 3]],
    planes: &[IntentionPlane],
    strategies: &[Strategy],
    kmeans: &KMeansConfig,
    runs: usize,
) -> Result<Vec<RuntimeRow>> {
    if planes.is_empty() {
        return Err(Error::NoPlanes);
    }
    if points.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let runs = runs.max(1);
    let n = points.len();
    let mut rows = Vec::new();
    for &strategy in strategies {
        let times = match strategy {
            Strategy::BruteForce => time_runs(runs, n, || {
                let out: Vec<Assignment> = points
                    .iter()
                    .map(|p| nearest_plane(*black_box(p), black_box(planes)).expect("planes non-empty"))
                    .collect();
                black_box(&out);
            }),
            Strategy::Heuristic => {
                let index = HeuristicIndex::from_points(planes, points)?;
                time_runs(runs, n, || {
                    let out: Vec<Assignment> = points
                        .iter()
                        .map(|p| index.assign(*black_box(p), black_box(planes)))
                        .collect();
                    black_box(&out);
                })
            }
            Strategy::Clustered => {
                let mut assigner = ClusteredAssigner::fit(points, planes, kmeans)?;
                time_runs(runs, n, || {
                    assigner.classify_centroids(black_box(planes));
                    black_box(&assigner.broadcast());
                })
            }
        };
        rows.push(RuntimeRow {
            strategy,
            ns_per_record: median(&mut times.clone()),
            runs: times,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planes_are_parallel_and_spread() {
        let planes = parallel_planes(8);
        assert_eq!(planes.len(), 8);
        let sep = crate::intention::min_pairwise_separation(&planes);
        assert!(sep > 0.1);
    }

    #[test]
    fn one_row_per_strategy() {
        let rows = benchmark_runtime(
            &uniform_points(200, 1),
            &parallel_planes(4),
            &Strategy::ALL,
            &KMeansConfig::default(),
            3,
        )
        .unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.ns_per_record > 0.0 && r.runs.len() == 3));
    }
}
