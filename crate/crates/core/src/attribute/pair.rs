use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{ImageServiceRecord, ServicePair};
use crate::{Error, Result};

/// How a candidate finds its original.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "rule")]
pub enum PairingRule {
    /// Candidate id is `<original id><separator>...`; the longest matching
    /// original id wins.
    IdPrefix { separator: String },
    /// Both sides carry the same value under `tag`.
    Tag { tag: String },
}

impl Default for PairingRule {
    fn default() -> Self {
        PairingRule::IdPrefix {
            separator: "_".into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PairingReport {
    /// Ordered by candidate id.
    pub pairs: Vec<ServicePair>,
    pub unmatched: Vec<String>,
}

pub fn pair_records(
    originals: &[ImageServiceRecord],
    candidates: &[ImageServiceRecord],
    rule: &PairingRule,
) -> Result<PairingReport> {
    check_unique(originals)?;
    check_unique(candidates)?;

    let mut sorted: Vec<&ImageServiceRecord> = candidates.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));

    let mut report = PairingReport::default();
    match rule {
        PairingRule::IdPrefix { separator } => {
            let by_id: BTreeMap<&str, &ImageServiceRecord> =
                originals.iter().map(|r| (r.id.as_str(), r)).collect();
            for cand in sorted {
                let prefixes: Vec<&str> = cand
                    .id
                    .match_indices(separator.as_str())
                    .map(|(i, _)| &cand.id[..i])
                    .collect();
                let found = prefixes.into_iter().rev().find_map(|prefix| by_id.get(prefix));
                match found {
                    Some(orig) => report
                        .pairs
                        .push(ServicePair::new((*orig).clone(), cand.clone())?),
                    None => report.unmatched.push(cand.id.clone()),
                }
            }
        }
        PairingRule::Tag { tag } => {
            let mut by_key: BTreeMap<&str, &ImageServiceRecord> = BTreeMap::new();
            for orig in originals {
                if let Some(key) = orig.raw_tags.get(tag) {
                    if by_key.insert(key.as_str(), orig).is_some() {
                        return Err(Error::DuplicateId(format!("{tag}={key}")));
                    }
                }
            }
            for cand in sorted {
                match cand.raw_tags.get(tag).and_then(|k| by_key.get(k.as_str())) {
                    Some(orig) if orig.id != cand.id => report
                        .pairs
                        .push(ServicePair::new((*orig).clone(), cand.clone())?),
                    _ => report.unmatched.push(cand.id.clone()),
                }
            }
        }
    }
    Ok(report)
}

fn check_unique(records: &[ImageServiceRecord]) -> Result<()> {
    let mut seen = HashSet::new();
    for r in records {
        if !seen.insert(r.id.as_str()) {
            return Err(Error::DuplicateId(r.id.clone()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str) -> ImageServiceRecord {
        ImageServiceRecord::from_tags(id, BTreeMap::new()).unwrap()
    }

    #[test]
    fn prefix_rule_pairs_in_candidate_order() {
        let report = pair_records(
            &[rec("a")],
            &[rec("a_m2"), rec("a_m1")],
            &PairingRule::default(),
        )
        .unwrap();
        let ids: Vec<(&str, &str)> = report
            .pairs
            .iter()
            .map(|p| (p.original.id.as_str(), p.candidate.id.as_str()))
            .collect();
        assert_eq!(ids, vec![("a", "a_m1"), ("a", "a_m2")]);
        assert!(report.unmatched.is_empty());
    }

    #[test]
    fn longest_prefix_wins() {
        let report = pair_records(&[rec("a"), rec("a_b")], &[rec("a_b_m1")], &PairingRule::default())
            .unwrap();
        assert_eq!(report.pairs[0].original.id, "a_b");
    }

    #[test]
    fn unmatched_candidates_are_reported() {
        let report = pair_records(&[rec("a")], &[rec("z_m1")], &PairingRule::default()).unwrap();
        assert!(report.pairs.is_empty());
        assert_eq!(report.unmatched, vec!["z_m1".to_string()]);
    }

    #[test]
    fn duplicate_original_ids() {
        let err = pair_records(&[rec("a"), rec("a")], &[rec("a_m1")], &PairingRule::default());
        assert_eq!(err, Err(Error::DuplicateId("a".into())));
    }

    #[test]
    fn tag_rule() {
        let mut o = rec("orig");
        o.raw_tags.insert("ImageUniqueID".into(), "K1".into());
        let mut c = rec("copy");
        c.raw_tags.insert("ImageUniqueID".into(), "K1".into());
        let report = pair_records(
            &[o],
            &[c, rec("other")],
            &PairingRule::Tag {
                tag: "ImageUniqueID".into(),
            },
        )
        .unwrap();
        assert_eq!(report.pairs.len(), 1);
        assert_eq!(report.unmatched, vec!["other".to_string()]);
    }
}
