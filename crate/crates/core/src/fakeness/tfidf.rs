use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::attribute::ImageServiceRecord;
use crate::delta::{contextual_tokens, tokenize_all};
use crate::{Error, Result};

/// Document frequencies of contextual tokens over a reference corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KeywordStats {
    pub documents: usize,
    pub document_frequency: BTreeMap<String, usize>,
}

impl KeywordStats {
    pub fn from_documents<'a, I>(documents: I) -> Self
    where
        I: IntoIterator<Item = &'a BTreeSet<String>>,
    {
        let mut stats = Self::default();
        for doc in documents {
            stats.documents += 1;
            for t in doc {
                *stats.document_frequency.entry(t.clone()).or_default() += 1;
            }
        }
        stats
    }

    pub fn from_records(records: &[ImageServiceRecord]) -> Self {
        let docs: Vec<BTreeSet<String>> = records.iter().map(contextual_tokens).collect();
        Self::from_documents(&docs)
    }

    /// `ln((1 + N) / (1 + df)) + 1`; unseen tokens get the maximum.
    pub fn idf(&self, token: &str) -> f64 {
        let df = self.document_frequency.get(token).copied().unwrap_or(0);
        ((1.0 + self.documents as f64) / (1.0 + df as f64)).ln() + 1.0
    }

    pub fn max_idf(&self) -> f64 {
        (1.0 + self.documents as f64).ln() + 1.0
    }
}

/// tf-idf of each modified token, scaled so the most significant is 1.
pub fn keyword_significance(modified: &[String], stats: &KeywordStats) -> Result<BTreeMap<String, f64>> {
    if stats.documents == 0 {
        return Err(Error::EmptyCorpus);
    }
    if modified.is_empty() {
        return Err(Error::EmptyKeywordSet);
    }
    let mut tf: BTreeMap<&str, f64> = BTreeMap::new();
    for t in modified {
        *tf.entry(t.as_str()).or_default() += 1.0;
    }
    let raw: BTreeMap<String, f64> = tf.iter().map(|(t, f)| (t.to_string(), f * stats.idf(t))).collect();
    let max = raw.values().copied().fold(0.0, f64::max);
    Ok(raw.into_iter().map(|(t, v)| (t, v / max)).collect())
}

/// Tokens present on exactly one side of a pair's contextual channel.
pub fn modified_keywords(original: &ImageServiceRecord, candidate: &ImageServiceRecord) -> Vec<String> {
    let a = contextual_tokens(original);
    let b = contextual_tokens(candidate);
    let changed: BTreeSet<&String> = a.symmetric_difference(&b).collect();
    let mut out: Vec<String> = tokenize_all(candidate.contextual.texts())
        .into_iter()
        .chain(tokenize_all(original.contextual.texts()))
        .filter(|t| changed.contains(t))
        .collect();
    out.sort();
    out
}

/// Relevance of the most significant changed keyword relative to an unseen
/// one, in [0, 1]; 0 when nothing changed.
pub fn keyword_feature(modified: &[String], stats: &KeywordStats) -> f64 {
    if stats.documents == 0 {
        return 0.0;
    }
    modified.iter().map(|t| stats.idf(t)).fold(0.0, f64::max) / stats.max_idf()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(tokens: &[&str]) -> BTreeSet<String> {
        tokens.iter().map(|t| t.to_string()).collect()
    }

    fn ten_docs() -> KeywordStats {
        let mut docs = vec![set(&["common", "rare"])];
        for _ in 0..9 {
            docs.push(set(&["common", "other"]));
        }
        KeywordStats::from_documents(&docs)
    }

    #[test]
    fn rare_beats_common() {
        let stats = ten_docs();
        let sig = keyword_significance(&["common".into(), "rare".into()], &stats).unwrap();
        assert_eq!(sig["rare"], 1.0);
        // oracle: (ln(11/11) + 1) / (ln(11/2) + 1)
        let expect = 1.0 / ((11f64 / 2.0).ln() + 1.0);
        assert!((sig["common"] - expect).abs() < 1e-12);
    }

    #[test]
    fn single_and_empty() {
        let stats = ten_docs();
        assert_eq!(keyword_significance(&["other".into()], &stats).unwrap()["other"], 1.0);
        assert_eq!(keyword_significance(&[], &stats), Err(Error::EmptyKeywordSet));
        assert_eq!(
            keyword_significance(&["x".into()], &KeywordStats::default()),
            Err(Error::EmptyCorpus)
        );
    }

    #[test]
    fn unseen_token_has_max_idf() {
        let stats = ten_docs();
        assert_eq!(stats.idf("never"), stats.max_idf());
        assert_eq!(keyword_feature(&["never".into()], &stats), 1.0);
        assert_eq!(keyword_feature(&[], &stats), 0.0);
    }
}
