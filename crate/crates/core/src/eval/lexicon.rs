//! Word lists and places the synthetic corpora are drawn from.

/// One scene type: concept groups, each a set of interchangeable words.
pub struct Topic {
    pub name: &'static str,
    pub concepts: &'static [&'static [&'static str]],
}

pub const TOPICS: [Topic; 5] = [
    Topic {
        name: "road-accident",
        concepts: &[
            &["crash", "collision", "smash"],
            &["car", "vehicle", "automobile"],
            &["truck", "lorry"],
            &["highway", "motorway", "freeway"],
            &["ambulance", "paramedics"],
            &["injury", "wound"],
            &["driver", "motorist"],
            &["intersection", "junction", "crossroads"],
            &["skid", "swerve"],
            &["wreck", "wreckage"],
            &["traffic", "congestion"],
            &["bumper", "fender"],
            &["windshield", "windscreen"],
            &["tow", "towing"],
            &["road", "street"],
            &["speeding", "overspeed"],
        ],
    },
    Topic {
        name: "crime-scene",
        concepts: &[
            &["robbery", "heist", "holdup"],
            &["detective", "investigator", "inspector"],
            &["evidence", "clue"],
            &["suspect", "culprit"],
            &["fingerprint", "print"],
            &["tape", "cordon"],
            &["burglary", "breakin"],
            &["theft", "stealing"],
            &["gun", "firearm", "pistol"],
            &["arrest", "detention"],
            &["warrant", "subpoena"],
            &["alley", "backstreet"],
            &["witness", "bystander"],
            &["knife", "blade"],
            &["murder", "homicide"],
            &["jail", "prison"],
        ],
    },
    Topic {
        name: "violent-scene",
        concepts: &[
            &["riot", "unrest", "uprising"],
            &["fight", "brawl", "scuffle"],
            &["mob", "rabble"],
            &["teargas", "pepperspray"],
            &["fire", "blaze", "flames"],
            &["looting", "plundering"],
            &["clash", "confrontation"],
            &["baton", "truncheon"],
            &["smoke", "fumes"],
            &["attack", "assault"],
            &["barricade", "blockade"],
            &["rioters", "insurgents"],
            &["vandalism", "destruction"],
            &["stones", "rocks"],
            &["chaos", "mayhem"],
            &["wounded", "injured"],
        ],
    },
    Topic {
        name: "natural-disaster",
        concepts: &[
            &["flood", "deluge", "inundation"],
            &["earthquake", "quake", "tremor"],
            &["storm", "tempest"],
            &["hurricane", "cyclone", "typhoon"],
            &["landslide", "mudslide"],
            &["wildfire", "bushfire"],
            &["debris", "rubble"],
            &["evacuation", "exodus"],
            &["rescue", "relief"],
            &["shelter", "refuge"],
            &["tsunami", "tidal"],
            &["drought", "dryness"],
            &["damage", "devastation"],
            &["rain", "downpour"],
            &["wind", "gale"],
            &["collapse", "caving"],
        ],
    },
    Topic {
        name: "public-gathering",
        concepts: &[
            &["march", "parade", "procession"],
            &["crowd", "throng", "multitude"],
            &["rally", "demonstration"],
            &["festival", "carnival", "fiesta"],
            &["concert", "gig"],
            &["banner", "placard", "sign"],
            &["speech", "address"],
            &["audience", "spectators"],
            &["square", "plaza"],
            &["celebration", "festivity"],
            &["flag", "pennant"],
            &["music", "songs"],
            &["stage", "podium"],
            &["volunteers", "helpers"],
            &["candle", "vigil"],
            &["chant", "slogan"],
        ],
    },
];

/// Topic and concept group of a word, if it is in the lexicon.
pub fn locate(word: &str) -> Option<(usize, usize)> {
    TOPICS.iter().enumerate().find_map(|(t, topic)| {
        topic
            .concepts
            .iter()
            .position(|group| group.contains(&word))
            .map(|g| (t, g))
    })
}

/// Other words for the same concept.
pub fn synonyms(word: &str) -> Vec<&'static str> {
    match locate(word) {
        Some((t, g)) => TOPICS[t].concepts[g].iter().copied().filter(|w| *w != word).collect(),
        None => Vec::new(),
    }
}

/// Most frequent lexicon topic among `words`; ties go to the lower index.
pub fn dominant_topic<'a, I: IntoIterator<Item = &'a str>>(words: I) -> Option<usize> {
    let mut counts = [0usize; TOPICS.len()];
    for w in words {
        if let Some((t, _)) = locate(w) {
            counts[t] += 1;
        }
    }
    let max = *counts.iter().max()?;
    (max > 0).then(|| counts.iter().position(|c| *c == max).expect("max is present"))
}

pub struct City {
    pub name: &'static str,
    pub state: &'static str,
    pub country: &'static str,
    pub lat: f64,
    pub lon: f64,
}

const fn city(name: &'static str, state: &'static str, country: &'static str, lat: f64, lon: f64) -> City {
    City {
        name,
        state,
        country,
        lat,
        lon,
    }
}

pub const CITIES: [City; 24] = [
    city("Sydney", "New South Wales", "Australia", -33.8688, 151.2093),
    city("Melbourne", "Victoria", "Australia", -37.8136, 144.9631),
    city("Brisbane", "Queensland", "Australia", -27.4698, 153.0251),
    city("Perth", "Western Australia", "Australia", -31.9505, 115.8605),
    city("Adelaide", "South Australia", "Australia", -34.9285, 138.6007),
    city("Auckland", "Auckland", "New Zealand", -36.8485, 174.7633),
    city("Singapore", "Singapore", "Singapore", 1.3521, 103.8198),
    city("Tokyo", "Tokyo", "Japan", 35.6762, 139.6503),
    city("Osaka", "Osaka", "Japan", 34.6937, 135.5023),
    city("Seoul", "Seoul", "South Korea", 37.5665, 126.9780),
    city("Mumbai", "Maharashtra", "India", 19.0760, 72.8777),
    city("Delhi", "Delhi", "India", 28.7041, 77.1025),
    city("Dubai", "Dubai", "United Arab Emirates", 25.2048, 55.2708),
    city("Nairobi", "Nairobi", "Kenya", -1.2921, 36.8219),
    city("Cairo", "Cairo", "Egypt", 30.0444, 31.2357),
    city("London", "England", "United Kingdom", 51.5074, -0.1278),
    city("Paris", "Ile-de-France", "France", 48.8566, 2.3522),
    city("Berlin", "Berlin", "Germany", 52.5200, 13.4050),
    city("Madrid", "Madrid", "Spain", 40.4168, -3.7038),
    city("New York", "New York", "United States", 40.7128, -74.0060),
    city("Chicago", "Illinois", "United States", 41.8781, -87.6298),
    city("Los Angeles", "California", "United States", 34.0522, -118.2437),
    city("Toronto", "Ontario", "Canada", 43.6532, -79.3832),
    city("Sao Paulo", "Sao Paulo", "Brazil", -23.5505, -46.6333),
];

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn words_are_unique_and_tokenizer_stable() {
        let mut seen = BTreeSet::new();
        for topic in &TOPICS {
            assert!(topic.concepts.len() >= 12);
            for group in topic.concepts {
                assert!(group.len() >= 2);
                for w in *group {
                    assert!(seen.insert(*w), "duplicate {w}");
                    assert_eq!(crate::delta::tokenize(w), vec![w.to_string()]);
                }
            }
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(locate("lorry"), Some((0, 2)));
        assert_eq!(synonyms("crash"), vec!["collision", "smash"]);
        assert_eq!(dominant_topic(["flood", "quake", "car"]), Some(3));
        assert_eq!(dominant_topic(["zzz"]), None);
    }
}
