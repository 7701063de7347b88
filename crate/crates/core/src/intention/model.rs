use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::assign::{assign_points, Assignment, Strategy};
use super::kmeans::KMeansConfig;
use super::level::evenly_spaced;
use super::plane::{fit_planes, IntentionPlane};
use super::theta::{fit_theta, Theta};
use super::IntentionLevel;
use crate::attribute::{ImageServiceRecord, ServicePair};
use crate::delta::{
    contextual_delta, spatial_delta, temporal_delta, Channel, ChannelDelta, DeltaVector, NormalizationBounds,
    NormalizationMode, NormalizedDelta,
};
use crate::fakeness::{resolve_weight, Significance};
use crate::lsa::{channel_semantic_delta, RankRule, SemanticSpace, VectorizerConfig, Weighting};
use crate::regression::GradientConfig;
use crate::{Error, Result};

/// Which channels are measured semantically (LSA) rather than quantitatively.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelPolicy {
    /// Quantitative spatial and temporal, semantic contextual.
    #[default]
    Default,
    Quantitative,
    Semantic,
}

impl ChannelPolicy {
    pub fn is_semantic(self, channel: Channel) -> bool {
        match self {
            ChannelPolicy::Default => channel == Channel::Contextual,
            ChannelPolicy::Quantitative => false,
            ChannelPolicy::Semantic => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChannelPolicy::Default => "default",
            ChannelPolicy::Quantitative => "quantitative",
            ChannelPolicy::Semantic => "semantic",
        }
    }
}

impl fmt::Display for ChannelPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(ChannelPolicy::Default),
            "quantitative" => Ok(ChannelPolicy::Quantitative),
            "semantic" => Ok(ChannelPolicy::Semantic),
            _ => Err(Error::InvalidConfig(format!("unknown channel policy `{s}`"))),
        }
    }
}

/// Per-channel weights in 1..=5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelWeights {
    pub spatial: u8,
    pub temporal: u8,
    pub contextual: u8,
}

impl Default for ChannelWeights {
    /// Location and context are high-significance, high-precision
    /// attributes; timestamps are high-significance but noisier.
    fn default() -> Self {
        Self {
            spatial: resolve_weight(Significance::High, 95.0),
            temporal: resolve_weight(Significance::High, 85.0),
            contextual: resolve_weight(Significance::High, 95.0),
        }
    }
}

impl ChannelWeights {
    pub const UNIT: ChannelWeights = ChannelWeights {
        spatial: 5,
        temporal: 5,
        contextual: 5,
    };

    pub fn validate(&self) -> Result<()> {
        for w in self.to_array() {
            if !(1..=5).contains(&w) {
                return Err(Error::InvalidConfig(format!("weight {w} outside 1..=5")));
            }
        }
        Ok(())
    }

    pub fn to_array(&self) -> [u8; 3] {
        [self.spatial, self.temporal, self.contextual]
    }
}

/// Scales each component by `weight / 5`.
pub fn apply_weights(point: [f64; 3], weights: &ChannelWeights) -> [f64; 3] {
    let w = weights.to_array();
    [0, 1, 2].map(|i| point[i] * f64::from(w[i]) / 5.0)
}

/// Whether the weights feed plane fitting and assignment as well as the
/// regression.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightApplication {
    #[default]
    Both,
    RegressionOnly,
}

/// How semantic channels are embedded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Embedding {
    /// Truncated SVD latent vectors.
    #[default]
    Lsa,
    /// The weighted token vectors directly.
    Raw,
}

/// Semantic spaces per channel; only the channels the policy measures
/// semantically are fitted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpaces {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spatial: Option<SemanticSpace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temporal: Option<SemanticSpace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contextual: Option<SemanticSpace>,
}

impl ChannelSpaces {
    pub fn get(&self, channel: Channel) -> Option<&SemanticSpace> {
        match channel {
            Channel::Spatial => self.spatial.as_ref(),
            Channel::Temporal => self.temporal.as_ref(),
            Channel::Contextual => self.contextual.as_ref(),
        }
    }

    fn slot(&mut self, channel: Channel) -> &mut Option<SemanticSpace> {
        match channel {
            Channel::Spatial => &mut self.spatial,
            Channel::Temporal => &mut self.temporal,
            Channel::Contextual => &mut self.contextual,
        }
    }

    pub fn fit(
        records: &[ImageServiceRecord],
        policy: ChannelPolicy,
        weighting: Weighting,
        rank_rule: RankRule,
        embedding: Embedding,
    ) -> Result<Self> {
        let mut spaces = Self::default();
        for channel in Channel::ALL {
            if policy.is_semantic(channel) {
                let config = VectorizerConfig::fit(records, channel, weighting, 1)?;
                let space = match embedding {
                    Embedding::Lsa => SemanticSpace::fit_records(records, config, rank_rule)?,
                    Embedding::Raw => SemanticSpace::identity(config)?,
                };
                *spaces.slot(channel) = Some(space);
            }
        }
        Ok(spaces)
    }

    pub(crate) fn check_versions(&self) -> Result<()> {
        for channel in Channel::ALL {
            if let Some(space) = self.get(channel) {
                space.check_version()?;
            }
        }
        Ok(())
    }
}

/// Raw deltas for a pair under a channel policy. Channels absent on both
/// sides are recorded as missing.
pub fn pair_deltas(pair: &ServicePair, policy: ChannelPolicy, spaces: &ChannelSpaces) -> Result<DeltaVector> {
    let (a, b) = (&pair.original, &pair.candidate);
    let measure = |channel: Channel| -> Result<ChannelDelta> {
        let result = if policy.is_semantic(channel) {
            let space = spaces.get(channel).ok_or_else(|| {
                Error::InvalidConfig(format!("no semantic space for the {} channel", channel.name()))
            })?;
            channel_semantic_delta(pair, space)
        } else {
            let q = match channel {
                Channel::Spatial => spatial_delta(a, b),
                Channel::Temporal => temporal_delta(a, b),
                Channel::Contextual => contextual_delta(a, b),
            };
            q.map(ChannelDelta::quantitative)
        };
        match result {
            Err(Error::MissingChannel(_)) => Ok(ChannelDelta::missing()),
            other => other,
        }
    };
    Ok(DeltaVector {
        spatial: measure(Channel::Spatial)?,
        temporal: measure(Channel::Temporal)?,
        contextual: measure(Channel::Contextual)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Collapse training labels onto this many evenly spaced levels drawn
    /// from the labels present; `None` keeps every level.
    pub plane_count: Option<usize>,
    pub policy: ChannelPolicy,
    pub normalization: NormalizationMode,
    pub weights: ChannelWeights,
    pub weight_application: WeightApplication,
    pub rank_rule: RankRule,
    pub weighting: Weighting,
    pub embedding: Embedding,
    pub seed: u64,
    pub kmeans: KMeansConfig,
    pub gradient: GradientConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            plane_count: None,
            policy: ChannelPolicy::default(),
            normalization: NormalizationMode::default(),
            weights: ChannelWeights::default(),
            weight_application: WeightApplication::default(),
            rank_rule: RankRule::default(),
            weighting: Weighting::TermFrequency,
            embedding: Embedding::Lsa,
            seed: 0,
            kmeans: KMeansConfig::default(),
            gradient: GradientConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntentionModel {
    pub levels: Vec<IntentionLevel>,
    pub planes: Vec<IntentionPlane>,
    pub plane_residual_rms: Vec<f64>,
    pub theta: Theta,
    pub theta_training_accuracy: f64,
    pub weights: ChannelWeights,
    pub weight_application: WeightApplication,
    pub normalization: NormalizationBounds,
    pub policy: ChannelPolicy,
    pub spaces: ChannelSpaces,
    pub seed: u64,
    pub kmeans: KMeansConfig,
}

/// One pair's intention estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntentionEstimate {
    pub record_id: String,
    pub level: IntentionLevel,
    pub distance: f64,
    pub normalized: NormalizedDelta,
    pub raw: DeltaVector,
}

/// Unique records across both sides of the pairs, in first-seen order.
pub fn pair_records(pairs: &[ServicePair]) -> Vec<ImageServiceRecord> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for p in pairs {
        for r in [&p.original, &p.candidate] {
            if seen.insert(r.id.clone()) {
                out.push(r.clone());
            }
        }
    }
    out
}

impl IntentionModel {
    pub fn train(pairs: &[ServicePair], labels: &[IntentionLevel], config: &TrainConfig) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        if pairs.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: pairs.len(),
                got: labels.len(),
            });
        }
        config.weights.validate()?;
        let spaces = ChannelSpaces::fit(&pair_records(pairs), config.policy, config.weighting, config.rank_rule, config.embedding)?;
        let raw: Vec<DeltaVector> = pairs
            .iter()
            .map(|p| pair_deltas(p, config.policy, &spaces))
            .collect::<Result<_>>()?;
        let normalization = NormalizationBounds::fit(&raw, config.normalization)?;

        let mut present: Vec<IntentionLevel> = labels.to_vec();
        present.sort();
        present.dedup();
        let levels = match config.plane_count {
            Some(n) => evenly_spaced(&present, n)?,
            None => present,
        };
        let labels: Vec<IntentionLevel> = labels
            .iter()
            .map(|l| l.nearest_in(&levels).expect("levels non-empty"))
            .collect();

        let mut model = Self {
            levels,
            planes: Vec::new(),
            plane_residual_rms: Vec::new(),
            theta: Theta {
                levels: Vec::new(),
                model: crate::regression::Softmax {
                    weights: Vec::new(),
                    bias: Vec::new(),
                },
            },
            theta_training_accuracy: 0.0,
            weights: config.weights,
            weight_application: config.weight_application,
            normalization,
            policy: config.policy,
            spaces,
            seed: config.seed,
            kmeans: config.kmeans.clone(),
        };
        let regression_points: Vec<([f64; 3], IntentionLevel)> = raw
            .iter()
            .zip(&labels)
            .map(|(d, l)| (apply_weights(model.normalization.apply(d).to_array(), &model.weights), *l))
            .collect();
        let plane_points: Vec<([f64; 3], IntentionLevel)> = raw
            .iter()
            .zip(&labels)
            .map(|(d, l)| (model.plane_point(&model.normalization.apply(d)), *l))
            .collect();
        let fit = fit_theta(&regression_points, config.seed, &config.gradient)?;
        model.theta = fit.theta;
        model.theta_training_accuracy = fit.training_accuracy;
        let planes = fit_planes(&plane_points)?;
        model.plane_residual_rms = planes.iter().map(|p| p.residual_rms).collect();
        model.planes = planes.into_iter().map(|p| p.plane).collect();
        Ok(model)
    }

    /// Where a normalized delta lands in plane space.
    pub fn plane_point(&self, normalized: &NormalizedDelta) -> [f64; 3] {
        match self.weight_application {
            WeightApplication::Both => apply_weights(normalized.to_array(), &self.weights),
            WeightApplication::RegressionOnly => normalized.to_array(),
        }
    }

    pub fn raw_deltas(&self, pair: &ServicePair) -> Result<DeltaVector> {
        pair_deltas(pair, self.policy, &self.spaces)
    }

    pub fn assign(&self, points: &[[f64; 3]], strategy: Strategy) -> Result<Vec<Assignment>> {
        assign_points(points, &self.planes, strategy, &self.kmeans)
    }

    /// Regression estimate of the level for a normalized delta.
    pub fn theta_level(&self, normalized: &NormalizedDelta) -> IntentionLevel {
        self.theta.predict(apply_weights(normalized.to_array(), &self.weights))
    }

    pub(crate) fn check_versions(&self) -> Result<()> {
        self.spaces.check_versions()
    }
}

/// Deltas, normalization and nearest-plane assignment for every pair.
pub fn estimate_intention(
    pairs: &[ServicePair],
    model: &IntentionModel,
    strategy: Strategy,
) -> Result<Vec<IntentionEstimate>> {
    let raw: Vec<DeltaVector> = pairs.iter().map(|p| model.raw_deltas(p)).collect::<Result<_>>()?;
    let normalized: Vec<NormalizedDelta> = raw.iter().map(|d| model.normalization.apply(d)).collect();
    let points: Vec<[f64; 3]> = normalized.iter().map(|n| model.plane_point(n)).collect();
    let assignments = model.assign(&points, strategy)?;
    Ok(pairs
        .iter()
        .zip(raw)
        .zip(normalized)
        .zip(assignments)
        .map(|(((pair, raw), normalized), a)| IntentionEstimate {
            record_id: pair.candidate.id.clone(),
            level: a.level,
            distance: a.distance,
            normalized,
            raw,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(
            ChannelWeights::default(),
            ChannelWeights {
                spatial: 5,
                temporal: 4,
                contextual: 5
            }
        );
        let p = [0.5, 0.5, 0.5];
        assert_eq!(apply_weights(p, &ChannelWeights::UNIT), p);
        let w = ChannelWeights {
            spatial: 5,
            temporal: 1,
            contextual: 5,
        };
        assert!((apply_weights(p, &w)[1] - 0.1).abs() < 1e-15);
        assert!(ChannelWeights {
            spatial: 0,
            temporal: 1,
            contextual: 5
        }
        .validate()
        .is_err());
    }

    #[test]
    fn policy_names() {
        for p in [ChannelPolicy::Default, ChannelPolicy::Quantitative, ChannelPolicy::Semantic] {
            assert_eq!(p.name().parse::<ChannelPolicy>().unwrap(), p);
        }
        assert!(ChannelPolicy::Default.is_semantic(Channel::Contextual));
        assert!(!ChannelPolicy::Default.is_semantic(Channel::Spatial));
    }
}
