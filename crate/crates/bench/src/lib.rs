//! Shared inputs for the criterion benches.

use metatrust_core::eval::{parallel_planes, paraphrase_corpus, uniform_points};
use metatrust_core::intention::{pair_records, IntentionPlane};
use metatrust_core::ImageServiceRecord;

pub const SEED: u64 = 20_240_521;

/// Uniform points in the unit cube and `planes` parallel planes.
pub fn scoring_inputs(points: usize, planes: usize) -> (Vec<[f64; 3]>, Vec<IntentionPlane>) {
    (uniform_points(points, SEED), parallel_planes(planes))
}

/// Records (originals and candidates) of a paraphrase corpus.
pub fn caption_records(pairs: usize) -> Vec<ImageServiceRecord> {
    let corpus = paraphrase_corpus(pairs, SEED).expect("corpus generates");
    pair_records(&corpus.pairs().expect("pairs match"))
}
