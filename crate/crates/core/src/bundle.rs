//! The trained model file: intention model plus the keyword statistics the
//! translator needs, under one version tag.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::attribute::ServicePair;
use crate::fakeness::{keyword_feature, modified_keywords, translate, ContextProfile, FakenessReport, KeywordStats, TranslationInput};
use crate::intention::{estimate_intention, pair_records, IntentionLevel, IntentionModel, Strategy, TrainConfig};
use crate::{Error, Result};

pub const MODEL_VERSION: &str = "metatrust-model/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub version: String,
    pub intention: IntentionModel,
    pub keywords: KeywordStats,
}

impl ModelBundle {
    pub fn train(pairs: &[ServicePair], labels: &[IntentionLevel], config: &TrainConfig) -> Result<Self> {
        let intention = IntentionModel::train(pairs, labels, config)?;
        Ok(Self {
            version: MODEL_VERSION.into(),
            intention,
            keywords: KeywordStats::from_records(&pair_records(pairs)),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    /// Parses a model file, checking the version tag before anything else.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let found = value.get("version").and_then(|v| v.as_str()).unwrap_or("<none>");
        if found != MODEL_VERSION {
            return Err(Error::VersionMismatch {
                expected: MODEL_VERSION.into(),
                found: found.into(),
            });
        }
        let bundle: Self = serde_json::from_value(value)?;
        bundle.intention.check_versions()?;
        Ok(bundle)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Intention estimation followed by translation under `profile`, one
    /// report per pair in input order.
    pub fn score(&self, pairs: &[ServicePair], profile: &ContextProfile, strategy: Strategy) -> Result<Vec<FakenessReport>> {
        profile.validate()?;
        let estimates = estimate_intention(pairs, &self.intention, strategy)?;
        Ok(pairs
            .iter()
            .zip(estimates)
            .map(|(pair, e)| {
                let changed = modified_keywords(&pair.original, &pair.candidate);
                let input = TranslationInput {
                    record_id: e.record_id,
                    intention: e.level,
                    normalized: e.normalized,
                    keyword_significance: keyword_feature(&changed, &self.keywords),
                };
                translate(&input, profile)
            })
            .collect())
    }
}
