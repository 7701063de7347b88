use criterion::{black_box, criterion_group, criterion_main, Criterion};
use metatrust_bench::caption_records;
use metatrust_core::delta::Channel;
use metatrust_core::lsa::{build_matrix, RankRule, SemanticSpace, VectorizerConfig, Weighting};

fn lsa(c: &mut Criterion) {
    let records = caption_records(200);
    let config = VectorizerConfig::fit(&records, Channel::Contextual, Weighting::TfIdf, 1).unwrap();
    let (matrix, _) = build_matrix(&records, &config).unwrap();

    c.bench_function("lsa/fit_400_records", |b| {
        b.iter(|| SemanticSpace::fit(black_box(&matrix), RankRule::Fixed(5), config.clone()).unwrap())
    });

    let space = SemanticSpace::fit(&matrix, RankRule::Fixed(5), config.clone()).unwrap();
    c.bench_function("lsa/fold_in_record", |b| {
        b.iter(|| space.embed_record(black_box(&records[7])).unwrap())
    });
}

criterion_group!(benches, lsa);
criterion_main!(benches);
