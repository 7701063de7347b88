use metatrust_core::eval::{
    classify_pattern, evaluate_accuracy, mutate, pattern_corpus, pattern_level, planar_corpus, seed_record,
    unmodified_corpus, Magnitude, MutationPlan, PlanarConfig,
};
use metatrust_core::delta::{quantitative_deltas, Channel};
use metatrust_core::intention::{ChannelPolicy, IntentionLevel, KMeansConfig, Strategy, TrainConfig};
use metatrust_core::{Error, IntentionModel, ModelBundle};

#[test]
fn pattern_labels_survive_a_closed_loop() {
    let corpus = pattern_corpus(300, 5).unwrap();
    for pair in corpus.pairs().unwrap() {
        let re = pattern_level(classify_pattern(&pair.original, &pair.candidate));
        assert_eq!(corpus.labels[&pair.candidate.id], re, "{}", pair.candidate.id);
    }
}

#[test]
fn mutation_is_deterministic() {
    let r = seed_record("img1", 3);
    let plan = MutationPlan::new(17)
        .with(Channel::Spatial, Magnitude::Major)
        .with(Channel::Contextual, Magnitude::Minor);
    assert_eq!(mutate(&r, &plan).unwrap(), mutate(&r, &plan).unwrap());
}

#[test]
fn minor_everywhere_is_well_intention() {
    let r = seed_record("img2", 4);
    let plan = Channel::ALL
        .into_iter()
        .fold(MutationPlan::new(1), |p, c| p.with(c, Magnitude::Minor));
    let (cand, label) = mutate(&r, &plan).unwrap();
    assert_eq!(label, IntentionLevel::WellIntention);
    let d = quantitative_deltas(&r, &cand);
    assert!(d.spatial.value < 1.0 && d.temporal.value <= 3600.0);
}

#[test]
fn unmodified_pairs_have_zero_deltas() {
    for pair in unmodified_corpus(10, 2).unwrap().pairs().unwrap() {
        assert_eq!(quantitative_deltas(&pair.original, &pair.candidate).values(), [0.0; 3]);
    }
}

fn planar_model(noise: f64, policy: ChannelPolicy) -> (IntentionModel, Vec<metatrust_core::ServicePair>, Vec<IntentionLevel>) {
    let corpus = planar_corpus(&PlanarConfig {
        per_level: 40,
        noise,
        seed: 9,
        ..PlanarConfig::default()
    })
    .unwrap();
    let (pairs, labels) = corpus.labeled_pairs().unwrap();
    let config = TrainConfig {
        policy,
        ..TrainConfig::default()
    };
    (IntentionModel::train(&pairs, &labels, &config).unwrap(), pairs, labels)
}

#[test]
fn noiseless_planar_corpus_is_classified_perfectly() {
    let (model, pairs, labels) = planar_model(1e-9, ChannelPolicy::Quantitative);
    let report = evaluate_accuracy(&model, &pairs, &labels, Strategy::BruteForce).unwrap();
    assert_eq!(report.accuracy, 1.0);
    for level in &report.confusion.levels {
        assert_eq!(report.confusion.row_total(*level), 40);
    }
}

#[test]
fn clustering_every_point_matches_brute_force() {
    let (mut model, pairs, labels) = planar_model(0.08, ChannelPolicy::Default);
    model.kmeans = KMeansConfig {
        k: Some(pairs.len()),
        ..KMeansConfig::default()
    };
    let brute = evaluate_accuracy(&model, &pairs, &labels, Strategy::BruteForce).unwrap();
    let heur = evaluate_accuracy(&model, &pairs, &labels, Strategy::Heuristic).unwrap();
    let cluster = evaluate_accuracy(&model, &pairs, &labels, Strategy::Clustered).unwrap();
    assert_eq!(brute.accuracy, heur.accuracy);
    assert_eq!(brute.accuracy, cluster.accuracy);
}

#[test]
fn model_round_trips_and_checks_its_version() {
    let (_, pairs, labels) = planar_model(0.05, ChannelPolicy::Default);
    let bundle = ModelBundle::train(&pairs, &labels, &TrainConfig::default()).unwrap();
    let text = bundle.to_json();
    assert_eq!(ModelBundle::from_json(&text).unwrap().to_json(), text);
    let tampered = text.replacen("metatrust-model/1", "metatrust-model/9", 1);
    assert!(matches!(ModelBundle::from_json(&tampered), Err(Error::VersionMismatch { .. })));
}
