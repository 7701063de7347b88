use std::collections::{BTreeMap, BTreeSet};

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, Timelike};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lexicon::{dominant_topic, synonyms, CITIES, TOPICS};
use crate::attribute::tags;
use crate::attribute::{ImageServiceRecord, TimePoint};
use crate::delta::{
    contextual_delta, contextual_tokens, haversine_km, temporal_sources, tokenize, Channel, EARTH_RADIUS_KM,
};
use crate::intention::IntentionLevel;
use crate::{Error, Result};

/// Spatial change that counts as a relocation.
pub const MAJOR_SPATIAL_KM: f64 = 100.0;
/// Contextual distance that counts as a topic replacement.
pub const MAJOR_CONTEXTUAL: f64 = 0.9;
/// Distance reached by `Scaled(1.0)` on the spatial channel.
pub const SPATIAL_SCALE_KM: f64 = 2000.0;
/// Manhattan distance reached by `Scaled(1.0)` on the temporal channel.
pub const TEMPORAL_SCALE: f64 = 120.0;

const DATETIME_FORMAT: &str = "%Y:%m:%d %H:%M:%S";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Magnitude {
    /// GPS jitter under 1 km, a shift under an hour within the same day,
    /// or a synonym swap.
    Minor,
    /// Relocation of at least 100 km, a shift of at least a year, or
    /// replacement by another topic's words.
    Major,
    /// A controlled fraction `u` in [0, 1] of the channel's full range.
    Scaled(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutationPlan {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spatial: Option<Magnitude>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temporal: Option<Magnitude>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contextual: Option<Magnitude>,
    /// Required for scaled plans; otherwise derived from the pattern table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intent_label: Option<IntentionLevel>,
    pub seed: u64,
    /// Candidate id is `<original id>_<suffix>`.
    pub id_suffix: String,
}

impl MutationPlan {
    pub fn new(seed: u64) -> Self {
        Self {
            spatial: None,
            temporal: None,
            contextual: None,
            intent_label: None,
            seed,
            id_suffix: "m".into(),
        }
    }

    pub fn with(mut self, channel: Channel, magnitude: Magnitude) -> Self {
        *self.slot(channel) = Some(magnitude);
        self
    }

    pub fn get(&self, channel: Channel) -> Option<Magnitude> {
        match channel {
            Channel::Spatial => self.spatial,
            Channel::Temporal => self.temporal,
            Channel::Contextual => self.contextual,
        }
    }

    fn slot(&mut self, channel: Channel) -> &mut Option<Magnitude> {
        match channel {
            Channel::Spatial => &mut self.spatial,
            Channel::Temporal => &mut self.temporal,
            Channel::Contextual => &mut self.contextual,
        }
    }

    /// Minor/major pattern, `None` when any channel is scaled.
    pub fn pattern(&self) -> Option<[bool; 3]> {
        let mut out = [false; 3];
        for ch in Channel::ALL {
            match self.get(ch) {
                None | Some(Magnitude::Minor) => {}
                Some(Magnitude::Major) => out[ch.index()] = true,
                Some(Magnitude::Scaled(_)) => return None,
            }
        }
        Some(out)
    }

    /// The plan's ground-truth label.
    pub fn label(&self) -> Result<IntentionLevel> {
        if Channel::ALL.iter().all(|c| self.get(*c).is_none()) {
            return Err(Error::InvalidConfig("mutation plan touches no channel".into()));
        }
        match (self.pattern(), self.intent_label) {
            (Some(p), None) => Ok(pattern_level(p)),
            (Some(p), Some(l)) if pattern_level(p) == l => Ok(l),
            (Some(p), Some(l)) => Err(Error::InvalidConfig(format!(
                "label {l} contradicts pattern level {}",
                pattern_level(p)
            ))),
            (None, Some(l)) => Ok(l),
            (None, None) => Err(Error::InvalidConfig("scaled plans need an explicit label".into())),
        }
    }
}

/// Which channels changed by a major amount → intention level.
///
/// Severity `0.3·spatial + 0.2·temporal + 0.5·contextual` banded into five
/// levels: a lone context rewrite is worse than a lone relocation or
/// retiming, and a context rewrite combined with relocation is extreme.
pub fn pattern_level(major: [bool; 3]) -> IntentionLevel {
    use IntentionLevel::*;
    match major {
        [false, false, false] => WellIntention,
        [true, false, false] | [false, true, false] => BorderLine,
        [false, false, true] | [true, true, false] => ModeratelyIll,
        [false, true, true] => VeryIll,
        [true, false, true] | [true, true, true] => ExtremelyIll,
    }
}

/// Re-derives the minor/major pattern from an actual pair of records.
pub fn classify_pattern(original: &ImageServiceRecord, candidate: &ImageServiceRecord) -> [bool; 3] {
    let spatial = match (original.spatial.gps(), candidate.spatial.gps()) {
        (Some(a), Some(b)) => haversine_km(a, b) >= MAJOR_SPATIAL_KM,
        _ => false,
    };
    let temporal = temporal_sources(original, candidate).is_some_and(|(a, b)| (a.year - b.year).abs() >= 1);
    let contextual = contextual_delta(original, candidate).is_ok_and(|d| d >= MAJOR_CONTEXTUAL);
    [spatial, temporal, contextual]
}

/// Applies a plan to a record; deterministic in the plan's seed.
pub fn mutate(record: &ImageServiceRecord, plan: &MutationPlan) -> Result<(ImageServiceRecord, IntentionLevel)> {
    let label = plan.label()?;
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut updates: Vec<(String, Option<String>)> = Vec::new();
    if let Some(m) = plan.spatial {
        updates.extend(mutate_spatial(record, m, &mut rng)?);
    }
    if let Some(m) = plan.temporal {
        updates.extend(mutate_temporal(record, m, &mut rng)?);
    }
    if let Some(m) = plan.contextual {
        let tokens: Vec<String> = contextual_tokens(record).into_iter().collect();
        if tokens.is_empty() {
            return Err(missing(record, Channel::Contextual));
        }
        let mapping = match m {
            Magnitude::Minor => {
                let n = tokens.len();
                // keep the change well under the major threshold
                let max = (0..=n).take_while(|k| 2.0 * *k as f64 / ((n + k) as f64) < 0.5).last().unwrap_or(0);
                synonym_mapping(&tokens, rng.gen_range(1..=2).min(max), &mut rng)
            }
            Magnitude::Major => topic_mapping(&tokens, tokens.len(), &mut rng),
            Magnitude::Scaled(u) => {
                let u = check_fraction(u)?;
                let n = tokens.len() as f64;
                let k = ((n * u / (2.0 - u)).round() as usize).min(tokens.len());
                topic_mapping(&tokens, k, &mut rng)
            }
        };
        updates.extend(rewrite_context(record, &mapping));
    }
    let id = format!("{}_{}", record.id, plan.id_suffix);
    Ok((record.with_tags(id, updates)?, label))
}

fn missing(record: &ImageServiceRecord, channel: Channel) -> Error {
    Error::ChannelMissing {
        id: record.id.clone(),
        channel: channel.name(),
    }
}

fn check_fraction(u: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&u) {
        Ok(u)
    } else {
        Err(Error::InvalidConfig(format!("scaled magnitude {u} outside [0, 1]")))
    }
}

/// Point `distance_km` from `(lat, lon)` along `bearing` (radians).
pub fn destination(lat: f64, lon: f64, distance_km: f64, bearing: f64) -> (f64, f64) {
    let (phi1, lambda1) = (lat.to_radians(), lon.to_radians());
    let delta = distance_km / EARTH_RADIUS_KM;
    let phi2 = (phi1.sin() * delta.cos() + phi1.cos() * delta.sin() * bearing.cos()).asin();
    let lambda2 =
        lambda1 + (bearing.sin() * delta.sin() * phi1.cos()).atan2(delta.cos() - phi1.sin() * phi2.sin());
    let mut lon2 = lambda2.to_degrees();
    while lon2 > 180.0 {
        lon2 -= 360.0;
    }
    while lon2 < -180.0 {
        lon2 += 360.0;
    }
    (phi2.to_degrees(), lon2)
}

fn coord(x: f64) -> String {
    format!("{x:.6}")
}

fn gps_updates(lat: f64, lon: f64) -> Vec<(String, Option<String>)> {
    vec![
        (tags::GPS_LATITUDE.into(), Some(coord(lat))),
        (tags::GPS_LONGITUDE.into(), Some(coord(lon))),
    ]
}

fn mutate_spatial(
    record: &ImageServiceRecord,
    magnitude: Magnitude,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(String, Option<String>)>> {
    let (lat, lon) = record.spatial.gps().ok_or_else(|| missing(record, Channel::Spatial))?;
    let bearing = rng.gen_range(0.0..std::f64::consts::TAU);
    Ok(match magnitude {
        Magnitude::Minor => {
            let (la, lo) = destination(lat, lon, rng.gen_range(0.05..0.95), bearing);
            gps_updates(la, lo)
        }
        Magnitude::Major => {
            let far: Vec<_> = CITIES
                .iter()
                .filter(|c| haversine_km((lat, lon), (c.lat, c.lon)) >= MAJOR_SPATIAL_KM + 50.0)
                .collect();
            let city = far.choose(rng).expect("city list spans the globe");
            let (la, lo) = destination(city.lat, city.lon, rng.gen_range(0.0..5.0), bearing);
            let mut u = gps_updates(la, lo);
            u.push((tags::CITY.into(), Some(city.name.into())));
            u.push((tags::STATE.into(), Some(city.state.into())));
            u.push((tags::COUNTRY.into(), Some(city.country.into())));
            u
        }
        Magnitude::Scaled(x) => {
            let (la, lo) = destination(lat, lon, check_fraction(x)? * SPATIAL_SCALE_KM, bearing);
            gps_updates(la, lo)
        }
    })
}

fn capture_tag(record: &ImageServiceRecord) -> Option<(&'static str, TimePoint)> {
    let t = &record.temporal;
    if let Some(tp) = t.datetime_original {
        Some((tags::DATE_TIME_ORIGINAL, tp))
    } else {
        t.date_digitized.map(|tp| (tags::DATE_TIME_DIGITIZED, tp))
    }
}

fn mutate_temporal(
    record: &ImageServiceRecord,
    magnitude: Magnitude,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(String, Option<String>)>> {
    let (tag, tp) = capture_tag(record).ok_or_else(|| missing(record, Channel::Temporal))?;
    let t = tp.to_naive().ok_or_else(|| missing(record, Channel::Temporal))?;
    let shifted = match magnitude {
        Magnitude::Minor => {
            let secs = rng.gen_range(60..=3600);
            let later = t + Duration::seconds(secs);
            if later.date() == t.date() {
                later
            } else {
                t - Duration::seconds(secs)
            }
        }
        Magnitude::Major => {
            let years = rng.gen_range(1..=5);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let moved = add_years(t, sign * years);
            let extra = Duration::days(rng.gen_range(0..60)) + Duration::seconds(rng.gen_range(0..86_400));
            if sign > 0 {
                moved + extra
            } else {
                moved - extra
            }
        }
        Magnitude::Scaled(u) => {
            let target = (check_fraction(u)? * TEMPORAL_SCALE).round() as i64;
            manhattan_shift(t, target, rng)?
        }
    };
    let mut updates = vec![(tag.to_string(), Some(format_naive(&shifted, tp.utc_offset_minutes)))];
    // keep digitized >= original when only the original moved
    if tag == tags::DATE_TIME_ORIGINAL && record.temporal.date_digitized.is_some() {
        updates.push((tags::DATE_TIME_DIGITIZED.into(), Some(format_naive(&shifted, tp.utc_offset_minutes))));
    }
    Ok(updates)
}

fn format_naive(t: &NaiveDateTime, offset: Option<i32>) -> String {
    // stored time points are UTC when an offset is known; write them back as UTC
    let base = t.format(DATETIME_FORMAT).to_string();
    match offset {
        Some(_) => format!("{base}+00:00"),
        None => base,
    }
}

fn add_years(t: NaiveDateTime, years: i32) -> NaiveDateTime {
    let y = t.year() + years;
    let date = NaiveDate::from_ymd_opt(y, t.month(), t.day())
        .or_else(|| NaiveDate::from_ymd_opt(y, t.month(), 28))
        .expect("day 28 exists in every month");
    date.and_time(t.time())
}

/// A time point exactly `target` Manhattan units away from `t`, spread over
/// the components at random.
fn manhattan_shift(t: NaiveDateTime, target: i64, rng: &mut ChaCha8Rng) -> Result<NaiveDateTime> {
    const YEAR_CAP: i64 = 30;
    let comps = [
        t.year() as i64,
        t.month() as i64,
        t.day() as i64,
        t.hour() as i64,
        t.minute() as i64,
        t.second() as i64,
    ];
    // (lowest, highest) each component may take; days stay <= 28 when raised
    let bounds = [
        (comps[0] - YEAR_CAP, comps[0] + YEAR_CAP),
        (1, 12),
        (1, comps[2].max(28)),
        (0, 23),
        (0, 59),
        (0, 59),
    ];
    for _ in 0..64 {
        let mut order: Vec<usize> = (0..6).collect();
        order.shuffle(rng);
        let mut next = comps;
        let mut remaining = target;
        for i in order {
            if remaining == 0 {
                break;
            }
            let up = bounds[i].1 - comps[i];
            let down = comps[i] - bounds[i].0;
            let go_up = if up >= remaining && down >= remaining {
                rng.gen_bool(0.5)
            } else {
                up >= down
            };
            let amount = remaining.min(if go_up { up } else { down });
            next[i] = if go_up { comps[i] + amount } else { comps[i] - amount };
            remaining -= amount;
        }
        if remaining != 0 {
            return Err(Error::InvalidConfig(format!("temporal shift {target} exceeds the reachable range")));
        }
        let date = NaiveDate::from_ymd_opt(next[0] as i32, next[1] as u32, next[2] as u32);
        if let Some(dt) = date.and_then(|d| d.and_hms_opt(next[3] as u32, next[4] as u32, next[5] as u32)) {
            return Ok(dt);
        }
    }
    Err(Error::InvalidConfig("no calendar-valid temporal shift found".into()))
}

/// Maps up to `count` tokens that have lexicon synonyms onto a synonym not
/// already present.
pub(crate) fn synonym_mapping(tokens: &[String], count: usize, rng: &mut ChaCha8Rng) -> BTreeMap<String, String> {
    let present: BTreeSet<&str> = tokens.iter().map(String::as_str).collect();
    let mut candidates: Vec<(&String, Vec<&'static str>)> = tokens
        .iter()
        .map(|t| {
            let alts: Vec<&'static str> = synonyms(t).into_iter().filter(|s| !present.contains(s)).collect();
            (t, alts)
        })
        .filter(|(_, alts)| !alts.is_empty())
        .collect();
    candidates.shuffle(rng);
    let mut used = BTreeSet::new();
    let mut out = BTreeMap::new();
    for (t, alts) in candidates {
        if out.len() == count {
            break;
        }
        let fresh: Vec<&&str> = alts.iter().filter(|a| !used.contains(**a)).collect();
        if let Some(s) = fresh.choose(rng) {
            used.insert(**s);
            out.insert(t.clone(), s.to_string());
        }
    }
    out
}

/// Maps `count` distinct tokens onto distinct words of another topic that
/// are not already present.
pub(crate) fn topic_mapping(tokens: &[String], count: usize, rng: &mut ChaCha8Rng) -> BTreeMap<String, String> {
    let present: BTreeSet<&str> = tokens.iter().map(String::as_str).collect();
    let own = dominant_topic(tokens.iter().map(String::as_str));
    let mut others: Vec<usize> = (0..TOPICS.len()).filter(|t| Some(*t) != own).collect();
    others.shuffle(rng);
    let mut pool: Vec<&'static str> = Vec::new();
    for t in others {
        let mut words: Vec<&'static str> = TOPICS[t]
            .concepts
            .iter()
            .flat_map(|g| g.iter().copied())
            .filter(|w| !present.contains(w))
            .collect();
        words.shuffle(rng);
        pool.extend(words);
    }
    let mut chosen: Vec<&String> = tokens.iter().collect();
    chosen.shuffle(rng);
    chosen
        .into_iter()
        .take(count)
        .zip(pool)
        .map(|(t, w)| (t.clone(), w.to_string()))
        .collect()
}

/// Rewrites every contextual tag with tokens substituted by `mapping`.
pub(crate) fn rewrite_context(
    record: &ImageServiceRecord,
    mapping: &BTreeMap<String, String>,
) -> Vec<(String, Option<String>)> {
    let map_text = |text: &str| -> String {
        tokenize(text)
            .into_iter()
            .map(|t| mapping.get(&t).cloned().unwrap_or(t))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = Vec::new();
    for tag in tags::CONTEXT_TEXT_TAGS {
        if let Some(v) = record.raw_tags.get(tag) {
            out.push((tag.to_string(), Some(map_text(v))));
        }
    }
    let c = &record.contextual;
    for (tag, items) in [(tags::KEYWORDS, &c.keywords), (tags::SEMANTIC_NAMES, &c.semantic_names)] {
        if !items.is_empty() {
            let joined: Vec<String> = items.iter().map(|i| map_text(i)).filter(|s| !s.is_empty()).collect();
            out.push((tag.to_string(), (!joined.is_empty()).then(|| joined.join(";"))));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_table() {
        use IntentionLevel::*;
        assert_eq!(pattern_level([false, false, false]), WellIntention);
        assert_eq!(pattern_level([false, false, true]), ModeratelyIll);
        assert_eq!(pattern_level([true, true, true]), ExtremelyIll);
        assert!(pattern_level([false, false, true]).is_ill());
    }

    #[test]
    fn destination_distance_round_trips() {
        for (d, b) in [(0.5, 0.3), (150.0, 2.0), (1999.0, 5.5)] {
            let (la, lo) = destination(-33.8688, 151.2093, d, b);
            assert!((haversine_km((-33.8688, 151.2093), (la, lo)) - d).abs() < 1e-6);
        }
    }

    #[test]
    fn manhattan_targets_are_exact() {
        let t = NaiveDate::from_ymd_opt(2016, 2, 29).unwrap().and_hms_opt(23, 59, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for target in [0, 1, 17, 60, 119, 120] {
            let s = manhattan_shift(t, target, &mut rng).unwrap();
            let a = TimePoint::from_naive(t, None);
            let b = TimePoint::from_naive(s, None);
            assert_eq!(crate::delta::temporal_manhattan(&a, &b), target as f64);
        }
    }
}
