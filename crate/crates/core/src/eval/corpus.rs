use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::mutate::{mutate, rewrite_context, synonym_mapping, topic_mapping, Magnitude, MutationPlan};
use super::seed::{derive_seed, seed_records};
use crate::attribute::{pair_records, parse_sidecar, ImageServiceRecord, PairingRule, ServicePair, SidecarFormat};
use crate::delta::{contextual_tokens, Channel};
use crate::intention::IntentionLevel;
use crate::{Error, Result};

pub const ORIGINALS_FILE: &str = "originals.jsonl";
pub const CANDIDATES_FILE: &str = "candidates.jsonl";
pub const LABELS_FILE: &str = "labels.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Severity weights of the spatial, temporal and contextual channels; each
/// level's plane is `SEVERITY · u = severity_center(level)`.
pub const SEVERITY: [f64; 3] = [0.3, 0.2, 0.5];

pub fn severity_center(level: IntentionLevel) -> f64 {
    0.1 + 0.2 * f64::from(level.ordinal())
}

/// How a corpus was generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Manifest {
    Planar(PlanarConfig),
    Pattern { count: usize, seed: u64 },
    Paraphrase { count: usize, seed: u64 },
    Unmodified { count: usize, seed: u64 },
}

/// Originals, candidates and (optional) ground-truth labels keyed by
/// candidate id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub originals: Vec<ImageServiceRecord>,
    pub candidates: Vec<ImageServiceRecord>,
    pub labels: BTreeMap<String, IntentionLevel>,
    pub manifest: Option<Manifest>,
}

impl Corpus {
    /// Pairs by id prefix; every candidate must find its original.
    pub fn pairs(&self) -> Result<Vec<ServicePair>> {
        let report = pair_records(&self.originals, &self.candidates, &PairingRule::default())?;
        if let Some(id) = report.unmatched.first() {
            return Err(Error::MalformedInput(format!("candidate `{id}` has no original")));
        }
        Ok(report.pairs)
    }

    /// Pairs with their labels; every candidate must be labeled.
    pub fn labeled_pairs(&self) -> Result<(Vec<ServicePair>, Vec<IntentionLevel>)> {
        let pairs = self.pairs()?;
        let labels = pairs
            .iter()
            .map(|p| {
                self.labels
                    .get(&p.candidate.id)
                    .copied()
                    .ok_or_else(|| Error::MalformedInput(format!("candidate `{}` has no label", p.candidate.id)))
            })
            .collect::<Result<_>>()?;
        Ok((pairs, labels))
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        write_jsonl(&dir.join(ORIGINALS_FILE), &self.originals)?;
        write_jsonl(&dir.join(CANDIDATES_FILE), &self.candidates)?;
        if !self.labels.is_empty() {
            write_labels(&dir.join(LABELS_FILE), &self.labels)?;
        }
        if let Some(m) = &self.manifest {
            let mut text = serde_json::to_string_pretty(m)?;
            text.push('\n');
            fs::write(dir.join(MANIFEST_FILE), text)?;
        }
        Ok(())
    }

    pub fn read_dir(dir: &Path) -> Result<Self> {
        let labels_path = dir.join(LABELS_FILE);
        let manifest_path = dir.join(MANIFEST_FILE);
        Ok(Self {
            originals: read_jsonl(&dir.join(ORIGINALS_FILE))?,
            candidates: read_jsonl(&dir.join(CANDIDATES_FILE))?,
            labels: if labels_path.exists() {
                read_labels(&labels_path)?
            } else {
                BTreeMap::new()
            },
            manifest: if manifest_path.exists() {
                Some(serde_json::from_str(&fs::read_to_string(manifest_path)?)?)
            } else {
                None
            },
        })
    }
}

pub fn read_jsonl(path: &Path) -> Result<Vec<ImageServiceRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            parse_sidecar(l.as_bytes(), SidecarFormat::JsonSidecar).map_err(|e| match e {
                Error::MalformedInput(m) => Error::MalformedInput(format!("{}:{}: {m}", path.display(), i + 1)),
                other => other,
            })
        })
        .collect()
}

pub fn write_jsonl(path: &Path, records: &[ImageServiceRecord]) -> Result<()> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, &r.to_json_value())?;
        out.push(b'\n');
    }
    fs::File::create(path)?.write_all(&out)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct LabelRow {
    id: String,
    level: String,
}

pub fn read_labels(path: &Path) -> Result<BTreeMap<String, IntentionLevel>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut out = BTreeMap::new();
    for row in reader.deserialize::<LabelRow>() {
        let row = row?;
        let level = row.level.parse()?;
        if out.insert(row.id.clone(), level).is_some() {
            return Err(Error::DuplicateId(row.id));
        }
    }
    Ok(out)
}

pub fn write_labels(path: &Path, labels: &BTreeMap<String, IntentionLevel>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for (id, level) in labels {
        writer.serialize(LabelRow {
            id: id.clone(),
            level: level.label().into(),
        })?;
    }
    writer.flush()?;
    Ok(())
}

/// Candidates placed around one plane per level in `(u_z, u_t, u_c)`
/// mutation-fraction space, with Gaussian noise along the contextual axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarConfig {
    pub levels: Vec<IntentionLevel>,
    pub per_level: usize,
    pub noise: f64,
    pub seed: u64,
}

impl Default for PlanarConfig {
    fn default() -> Self {
        Self {
            levels: IntentionLevel::scale(4).expect("four levels"),
            per_level: 250,
            noise: 0.08,
            seed: 0,
        }
    }
}

/// Mutation fractions on `level`'s plane, rejection-sampled into the unit
/// cube.
pub fn planar_fractions(level: IntentionLevel, noise: f64, rng: &mut ChaCha8Rng) -> Result<[f64; 3]> {
    let normal = Normal::new(0.0, noise).map_err(|e| Error::InvalidConfig(format!("noise: {e}")))?;
    let c = severity_center(level);
    for _ in 0..100_000 {
        let uz: f64 = rng.gen();
        let ut: f64 = rng.gen();
        let uc = (c - SEVERITY[0] * uz - SEVERITY[1] * ut) / SEVERITY[2] + normal.sample(rng);
        if (0.0..=1.0).contains(&uc) {
            return Ok([uz, ut, uc]);
        }
    }
    Err(Error::InvalidConfig(format!("level {level} plane does not meet the unit cube")))
}

pub fn planar_corpus(config: &PlanarConfig) -> Result<Corpus> {
    if config.levels.is_empty() || config.per_level == 0 {
        return Err(Error::EmptyCorpus);
    }
    let total = config.levels.len() * config.per_level;
    let originals = seed_records(total, config.seed);
    let mut candidates = Vec::with_capacity(total);
    let mut labels = BTreeMap::new();
    for (i, original) in originals.iter().enumerate() {
        let level = config.levels[i % config.levels.len()];
        let seed = derive_seed(config.seed ^ 0x706c_616e, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = planar_fractions(level, config.noise, &mut rng)?;
        let mut plan = MutationPlan::new(seed)
            .with(Channel::Spatial, Magnitude::Scaled(u[0]))
            .with(Channel::Temporal, Magnitude::Scaled(u[1]))
            .with(Channel::Contextual, Magnitude::Scaled(u[2]));
        plan.intent_label = Some(level);
        let (candidate, label) = mutate(original, &plan)?;
        labels.insert(candidate.id.clone(), label);
        candidates.push(candidate);
    }
    Ok(Corpus {
        originals,
        candidates,
        labels,
        manifest: Some(Manifest::Planar(config.clone())),
    })
}

/// Random minor/major plans on every channel, labeled by the pattern table.
pub fn pattern_corpus(count: usize, seed: u64) -> Result<Corpus> {
    let originals = seed_records(count, seed);
    let mut candidates = Vec::with_capacity(count);
    let mut labels = BTreeMap::new();
    for (i, original) in originals.iter().enumerate() {
        let s = derive_seed(seed ^ 0x7061_7474, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut plan = MutationPlan::new(s);
        for ch in Channel::ALL {
            let m = if rng.gen_bool(0.5) {
                Magnitude::Major
            } else {
                Magnitude::Minor
            };
            plan = plan.with(ch, m);
        }
        let (candidate, label) = mutate(original, &plan)?;
        labels.insert(candidate.id.clone(), label);
        candidates.push(candidate);
    }
    Ok(Corpus {
        originals,
        candidates,
        labels,
        manifest: Some(Manifest::Pattern { count, seed }),
    })
}

/// Contextual-only contrast: half the candidates paraphrase their caption
/// with synonyms (well-intention), half swap part of it for another
/// topic's words (moderately-ill). Both rewrite 50-100% of the words, and
/// location and time get minor jitter.
pub fn paraphrase_corpus(count: usize, seed: u64) -> Result<Corpus> {
    let originals = seed_records(count, seed);
    let mut candidates = Vec::with_capacity(count);
    let mut labels = BTreeMap::new();
    for (i, original) in originals.iter().enumerate() {
        let s = derive_seed(seed ^ 0x7061_7261, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let plan = MutationPlan::new(s)
            .with(Channel::Spatial, Magnitude::Minor)
            .with(Channel::Temporal, Magnitude::Minor);
        let (jittered, _) = mutate(original, &plan)?;
        let tokens: Vec<String> = contextual_tokens(original).into_iter().collect();
        let k = ((tokens.len() as f64) * rng.gen_range(0.5..=1.0)).round() as usize;
        let ill = i % 2 == 1;
        let mapping = if ill {
            topic_mapping(&tokens, k, &mut rng)
        } else {
            synonym_mapping(&tokens, k, &mut rng)
        };
        let candidate = jittered.with_tags(jittered.id.clone(), rewrite_context(&jittered, &mapping))?;
        let label = if ill {
            IntentionLevel::ModeratelyIll
        } else {
            IntentionLevel::WellIntention
        };
        labels.insert(candidate.id.clone(), label);
        candidates.push(candidate);
    }
    Ok(Corpus {
        originals,
        candidates,
        labels,
        manifest: Some(Manifest::Paraphrase { count, seed }),
    })
}

/// Candidates identical to their originals apart from the id.
pub fn unmodified_corpus(count: usize, seed: u64) -> Result<Corpus> {
    let originals = seed_records(count, seed);
    let mut candidates = Vec::with_capacity(count);
    let mut labels = BTreeMap::new();
    for o in &originals {
        let c = o.with_tags(format!("{}_same", o.id), Vec::new())?;
        labels.insert(c.id.clone(), IntentionLevel::WellIntention);
        candidates.push(c);
    }
    Ok(Corpus {
        originals,
        candidates,
        labels,
        manifest: Some(Manifest::Unmodified { count, seed }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_fractions_sit_on_their_plane_without_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for level in IntentionLevel::ALL {
            let u = planar_fractions(level, 1e-12, &mut rng).unwrap();
            let s: f64 = (0..3).map(|i| SEVERITY[i] * u[i]).sum();
            assert!((s - severity_center(level)).abs() < 1e-9);
        }
    }

    #[test]
    fn labeled_pairs_line_up() {
        let c = pattern_corpus(12, 1).unwrap();
        let (pairs, labels) = c.labeled_pairs().unwrap();
        assert_eq!(pairs.len(), 12);
        assert_eq!(labels.len(), 12);
    }
}
