use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use metatrust_bench::{scoring_inputs, SEED};
use metatrust_core::intention::{nearest_plane, ClusteredAssigner, HeuristicIndex, KMeansConfig};

fn assignment(c: &mut Criterion) {
    let mut group = c.benchmark_group("assignment");
    for n in [1_000, 10_000] {
        let (points, planes) = scoring_inputs(n, 8);
        group.throughput(Throughput::Elements(n as u64));

        group.bench_with_input(BenchmarkId::new("brute", n), &points, |b, pts| {
            b.iter(|| {
                pts.iter()
                    .map(|p| nearest_plane(*p, &planes).unwrap().plane)
                    .sum::<usize>()
            })
        });

        let index = HeuristicIndex::from_points(&planes, &points).unwrap();
        group.bench_with_input(BenchmarkId::new("heur", n), &points, |b, pts| {
            b.iter(|| pts.iter().map(|p| index.assign(*p, &planes).plane).sum::<usize>())
        });

        // clustering is training; only the per-centroid classification and
        // broadcast are timed
        let mut assigner = ClusteredAssigner::fit(&points, &planes, &KMeansConfig::with_seed(SEED)).unwrap();
        group.bench_function(BenchmarkId::new("cluster", n), |b| {
            b.iter(|| {
                assigner.classify_centroids(black_box(&planes));
                assigner.broadcast().len()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, assignment);
criterion_main!(benches);
