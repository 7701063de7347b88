use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::attribute::ImageServiceRecord;
use crate::delta::{tokenize, tokenize_all, Channel};
use crate::linalg::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    Binary,
    TermFrequency,
    TfIdf,
}

/// How one channel of a record becomes a row of the image-attribute matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorizerConfig {
    pub channel: Channel,
    pub weighting: Weighting,
    /// Column order of the matrix.
    pub vocabulary: Vec<String>,
    pub min_token_count: usize,
    /// Smoothed idf per vocabulary entry; empty unless weighting is tf-idf.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub idf: Vec<f64>,
}

/// Tokens of one channel, duplicates kept.
///
/// Spatial: words of city/country/state/location plus a 0.1° grid-cell token.
/// Temporal: labeled calendar tokens (`year-2015`, `month-04`, ...).
pub fn channel_tokens(record: &ImageServiceRecord, channel: Channel) -> Vec<String> {
    match channel {
        Channel::Contextual => tokenize_all(record.contextual.texts()),
        Channel::Spatial => {
            let s = &record.spatial;
            let mut out: Vec<String> = [&s.city, &s.country, &s.state, &s.location]
                .into_iter()
                .flatten()
                .flat_map(|t| tokenize(t))
                .collect();
            if let Some((lat, lon)) = s.gps() {
                out.push(format!(
                    "cell_{}_{}",
                    (lat * 10.0).floor() as i64,
                    (lon * 10.0).floor() as i64
                ));
            }
            out
        }
        Channel::Temporal => {
            let t = &record.temporal;
            let Some(tp) = t.datetime_original.or(t.date_digitized).or(t.gps_timestamp) else {
                return Vec::new();
            };
            vec![
                format!("year-{:04}", tp.year),
                format!("month-{:02}", tp.month),
                format!("day-{:02}", tp.day),
                format!("hour-{:02}", tp.hour),
            ]
        }
    }
}


impl VectorizerConfig {
    /// Builds the vocabulary (sorted, tokens seen at least `min_token_count`
    /// times) and, for tf-idf, the smoothed idf `ln((1+N)/(1+df)) + 1`.
    pub fn fit(
        records: &[ImageServiceRecord],
        channel: Channel,
        weighting: Weighting,
        min_token_count: usize,
    ) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let min_token_count = min_token_count.max(1);
        let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for r in records {
            let tokens = channel_tokens(r, channel);
            let mut seen = std::collections::BTreeSet::new();
            for t in tokens {
                let entry = counts.entry(t.clone()).or_default();
                entry.0 += 1;
                if seen.insert(t) {
                    entry.1 += 1;
                }
            }
        }
        let kept: Vec<(String, usize)> = counts
            .into_iter()
            .filter(|(_, (n, _))| *n >= min_token_count)
            .map(|(t, (_, df))| (t, df))
            .collect();
        if kept.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let n_docs = records.len() as f64;
        let idf = if weighting == Weighting::TfIdf {
            kept.iter()
                .map(|(_, df)| ((1.0 + n_docs) / (1.0 + *df as f64)).ln() + 1.0)
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            channel,
            weighting,
            vocabulary: kept.into_iter().map(|(t, _)| t).collect(),
            min_token_count,
            idf,
        })
    }

    pub fn with_vocabulary(channel: Channel, weighting: Weighting, vocabulary: Vec<String>) -> Result<Self> {
        if vocabulary.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let mut sorted = vocabulary.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != vocabulary.len() {
            return Err(Error::InvalidConfig("vocabulary tokens must be unique".into()));
        }
        Ok(Self {
            channel,
            weighting,
            vocabulary,
            min_token_count: 1,
            idf: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocabulary.is_empty()
    }

    pub fn vectorize_tokens(&self, tokens: &[String]) -> Vec<f64> {
        let index: BTreeMap<&str, usize> = self
            .vocabulary
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i))
            .collect();
        let mut row = vec![0.0_f64; self.vocabulary.len()];
        for t in tokens {
            if let Some(&i) = index.get(t.as_str()) {
                row[i] += 1.0;
            }
        }
        match self.weighting {
            Weighting::Binary => row.iter_mut().for_each(|x| *x = x.min(1.0)),
            Weighting::TermFrequency => {}
            Weighting::TfIdf => {
                for (x, idf) in row.iter_mut().zip(&self.idf) {
                    *x *= idf;
                }
            }
        }
        row
    }

    pub fn vectorize(&self, record: &ImageServiceRecord) -> Vec<f64> {
        self.vectorize_tokens(&channel_tokens(record, self.channel))
    }
}

/// The image-attribute matrix: one row per record, one column per
/// vocabulary token. Also returns the indices of all-zero rows.
pub fn build_matrix(records: &[ImageServiceRecord], config: &VectorizerConfig) -> Result<(Matrix, Vec<usize>)> {
    if records.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if config.vocabulary.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let rows: Vec<Vec<f64>> = records.iter().map(|r| config.vectorize(r)).collect();
    let zero_rows = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.iter().all(|x| *x == 0.0))
        .map(|(i, _)| i)
        .collect();
    Ok((Matrix::from_rows(&rows), zero_rows))
}
