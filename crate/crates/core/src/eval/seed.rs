use std::collections::BTreeMap;

use chrono::{Duration, NaiveDate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lexicon::{CITIES, TOPICS};
use super::mutate::destination;
use crate::attribute::{tags, ImageServiceRecord};

/// Words per caption; the first few double as keywords.
pub const CAPTION_WORDS: usize = 12;
const KEYWORD_COUNT: usize = 4;

/// Independent per-item seed derived from a master seed (splitmix64).
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A caption of distinct concepts from one topic, one random synonym each.
pub fn topic_caption(topic: usize, rng: &mut ChaCha8Rng) -> Vec<&'static str> {
    let mut groups: Vec<&[&str]> = TOPICS[topic].concepts.to_vec();
    groups.shuffle(rng);
    groups
        .into_iter()
        .take(CAPTION_WORDS)
        .map(|g| *g.choose(rng).expect("concept groups are non-empty"))
        .collect()
}

/// One plausible original record: GPS near a known city, a capture time
/// between 2010 and 2023, a topical caption and keywords, and consistent
/// camera settings.
pub fn seed_record(id: &str, seed: u64) -> ImageServiceRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let city = CITIES.choose(&mut rng).expect("city list is non-empty");
    let (lat, lon) = destination(
        city.lat,
        city.lon,
        rng.gen_range(0.0..5.0),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );
    let start = NaiveDate::from_ymd_opt(2010, 1, 1)
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .expect("valid date");
    let taken = start + Duration::seconds(rng.gen_range(0..14 * 365 * 86_400));
    let topic = rng.gen_range(0..TOPICS.len());
    let caption = topic_caption(topic, &mut rng);
    let shutter = *[60u32, 125, 250, 500, 1000].choose(&mut rng).expect("non-empty");

    let mut t = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        t.insert(k.to_string(), v);
    };
    put(tags::GPS_LATITUDE, format!("{lat:.6}"));
    put(tags::GPS_LONGITUDE, format!("{lon:.6}"));
    put(tags::CITY, city.name.into());
    put(tags::STATE, city.state.into());
    put(tags::COUNTRY, city.country.into());
    put(tags::DATE_TIME_ORIGINAL, taken.format("%Y:%m:%d %H:%M:%S").to_string());
    put(tags::CAPTION, caption.join(" "));
    put(tags::KEYWORDS, caption[..KEYWORD_COUNT].join(";"));
    put(tags::IMAGE_WIDTH, "4032".into());
    put(tags::IMAGE_HEIGHT, "3024".into());
    put(tags::SHUTTER_SPEED, format!("1/{shutter}"));
    put(tags::EXPOSURE_TIME, format!("1/{shutter}"));
    ImageServiceRecord::from_tags(id, t).expect("generated tags are valid")
}

/// `count` originals with ids `img00000`, `img00001`, ...
pub fn seed_records(count: usize, seed: u64) -> Vec<ImageServiceRecord> {
    (0..count)
        .map(|i| seed_record(&format!("img{i:05}"), derive_seed(seed, i as u64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attribute::validate;

    #[test]
    fn seeds_are_valid_and_deterministic() {
        let a = seed_records(20, 3);
        assert_eq!(a, seed_records(20, 3));
        assert_ne!(a, seed_records(20, 4));
        for r in &a {
            assert!(validate(r).is_empty(), "{r:?}");
            assert!(r.spatial.gps().is_some());
            assert_eq!(crate::delta::contextual_tokens(r).len(), CAPTION_WORDS);
        }
    }
}
