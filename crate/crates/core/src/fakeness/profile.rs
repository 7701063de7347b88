use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::delta::{Channel, NormalizedDelta};
use crate::intention::IntentionLevel;
use crate::regression::{fit_logistic, GradientConfig, Logistic};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Trustworthy,
    Suspect,
    Fake,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Trustworthy => "trustworthy",
            Verdict::Suspect => "suspect",
            Verdict::Fake => "fake",
        })
    }
}

/// `score < suspect` is trustworthy, `score >= fake` is fake.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub suspect: f64,
    pub fake: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            suspect: 0.33,
            fake: 0.66,
        }
    }
}

impl Thresholds {
    pub fn verdict(&self, score: f64) -> Verdict {
        if score < self.suspect {
            Verdict::Trustworthy
        } else if score < self.fake {
            Verdict::Suspect
        } else {
            Verdict::Fake
        }
    }
}

/// A declarative condition over normalized deltas and the intention level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "when")]
pub enum Condition {
    DeltaAbove { channel: Channel, threshold: f64 },
    IntentionAtLeast { level: IntentionLevel },
    All { conditions: Vec<Condition> },
}

impl Condition {
    pub fn holds(&self, input: &TranslationInput) -> bool {
        match self {
            Condition::DeltaAbove { channel, threshold } => input.delta(*channel) > *threshold,
            Condition::IntentionAtLeast { level } => input.intention >= *level,
            Condition::All { conditions } => conditions.iter().all(|c| c.holds(input)),
        }
    }

    fn channels(&self, out: &mut Vec<Channel>) {
        match self {
            Condition::DeltaAbove { channel, .. } => out.push(*channel),
            Condition::IntentionAtLeast { .. } => {}
            Condition::All { conditions } => conditions.iter().for_each(|c| c.channels(out)),
        }
    }

    fn mentions_intention(&self) -> bool {
        match self {
            Condition::DeltaAbove { .. } => false,
            Condition::IntentionAtLeast { .. } => true,
            Condition::All { conditions } => conditions.iter().any(Condition::mentions_intention),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpertRule {
    pub name: String,
    #[serde(flatten)]
    pub condition: Condition,
    pub harm: bool,
    pub confidence: f64,
}

impl ExpertRule {
    pub fn score(&self) -> f64 {
        if self.harm {
            self.confidence
        } else {
            0.0
        }
    }
}

/// How much a change in each channel matters in this context.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmCoefficients {
    pub spatial: f64,
    pub temporal: f64,
    pub contextual: f64,
}

impl Default for HarmCoefficients {
    fn default() -> Self {
        Self {
            spatial: 1.0,
            temporal: 1.0,
            contextual: 1.0,
        }
    }
}

/// Logistic translator over [`translator_features`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedTranslator {
    pub model: Logistic,
    pub training_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextProfile {
    pub name: String,
    #[serde(default)]
    pub harm: HarmCoefficients,
    #[serde(default)]
    pub rules: Vec<ExpertRule>,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trained: Option<TrainedTranslator>,
}

fn delta_rule(name: &str, channel: Channel, threshold: f64, confidence: f64) -> ExpertRule {
    ExpertRule {
        name: name.into(),
        condition: Condition::DeltaAbove { channel, threshold },
        harm: true,
        confidence,
    }
}

fn intention_rule(name: &str, level: IntentionLevel, confidence: f64) -> ExpertRule {
    ExpertRule {
        name: name.into(),
        condition: Condition::IntentionAtLeast { level },
        harm: true,
        confidence,
    }
}

impl ContextProfile {
    /// Context-free profile driven mainly by the intention level.
    pub fn general() -> Self {
        Self {
            name: "general".into(),
            harm: HarmCoefficients::default(),
            rules: vec![
                intention_rule("moderately-ill-intent", IntentionLevel::ModeratelyIll, 0.5),
                intention_rule("very-ill-intent", IntentionLevel::VeryIll, 0.7),
                intention_rule("extremely-ill-intent", IntentionLevel::ExtremelyIll, 0.9),
                ExpertRule {
                    name: "moved-and-retimed".into(),
                    condition: Condition::All {
                        conditions: vec![
                            Condition::DeltaAbove {
                                channel: Channel::Spatial,
                                threshold: 0.8,
                            },
                            Condition::DeltaAbove {
                                channel: Channel::Temporal,
                                threshold: 0.8,
                            },
                        ],
                    },
                    harm: true,
                    confidence: 0.8,
                },
            ],
            thresholds: Thresholds::default(),
            trained: None,
        }
    }

    /// Reconstructing an accident scene: where and when are what matter.
    pub fn road_accident() -> Self {
        Self {
            name: "road-accident".into(),
            harm: HarmCoefficients {
                spatial: 1.0,
                temporal: 1.0,
                contextual: 0.6,
            },
            rules: vec![
                delta_rule("relocated", Channel::Spatial, 0.5, 0.9),
                delta_rule("retimed", Channel::Temporal, 0.5, 0.8),
                delta_rule("recaptioned", Channel::Contextual, 0.7, 0.5),
                intention_rule("very-ill-intent", IntentionLevel::VeryIll, 0.7),
            ],
            thresholds: Thresholds::default(),
            trained: None,
        }
    }

    /// Analysing a public march: the described event matters more than the
    /// exact spot or minute.
    pub fn public_gathering() -> Self {
        Self {
            name: "public-gathering".into(),
            harm: HarmCoefficients {
                spatial: 0.5,
                temporal: 0.3,
                contextual: 1.0,
            },
            rules: vec![
                delta_rule("recaptioned", Channel::Contextual, 0.5, 0.9),
                delta_rule("different-city", Channel::Spatial, 0.9, 0.5),
                intention_rule("extremely-ill-intent", IntentionLevel::ExtremelyIll, 0.7),
            ],
            thresholds: Thresholds::default(),
            trained: None,
        }
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "general" => Some(Self::general()),
            "road-accident" => Some(Self::road_accident()),
            "public-gathering" => Some(Self::public_gathering()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rules.is_empty() && self.trained.is_none() {
            return Err(Error::InvalidConfig(format!(
                "profile `{}` has neither expert rules nor a trained translator",
                self.name
            )));
        }
        if let Some(r) = self.rules.iter().find(|r| !(0.0..=1.0).contains(&r.confidence)) {
            return Err(Error::InvalidConfig(format!(
                "rule `{}` confidence {} outside [0, 1]",
                r.name, r.confidence
            )));
        }
        let t = self.thresholds;
        if !(0.0 <= t.suspect && t.suspect <= t.fake && t.fake <= 1.0) {
            return Err(Error::InvalidConfig("thresholds must satisfy 0 <= suspect <= fake <= 1".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let profile: Self = serde_json::from_str(text)?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Everything the translator looks at for one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationInput {
    pub record_id: String,
    pub intention: IntentionLevel,
    pub normalized: NormalizedDelta,
    /// Relevance of the most significant changed keyword, in [0, 1].
    pub keyword_significance: f64,
}

impl TranslationInput {
    pub fn delta(&self, channel: Channel) -> f64 {
        self.normalized.to_array()[channel.index()]
    }
}

/// `[intention / 4, h_z·dz, h_t·dt, h_c·dc, keyword]`.
pub fn translator_features(input: &TranslationInput, harm: &HarmCoefficients) -> [f64; 5] {
    let d = input.normalized;
    [
        f64::from(input.intention.ordinal()) / 4.0,
        harm.spatial * d.dz_hat,
        harm.temporal * d.dt_hat,
        harm.contextual * d.dc_hat,
        input.keyword_significance,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TranslationPath {
    Trained,
    Rules,
}

/// Per-feature share of the score. On the trained path these are the
/// logit terms and sum (with `bias`) to the pre-sigmoid logit; on the rule
/// path each is the strongest matching rule touching that input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Contributions {
    pub intention: f64,
    pub spatial: f64,
    pub temporal: f64,
    pub contextual: f64,
    pub keywords: f64,
    pub bias: f64,
}

impl Contributions {
    pub fn total(&self) -> f64 {
        self.intention + self.spatial + self.temporal + self.contextual + self.keywords + self.bias
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FakenessReport {
    pub record_id: String,
    pub intention: IntentionLevel,
    pub fakeness_score: f64,
    pub verdict: Verdict,
    pub path: TranslationPath,
    pub contributions: Contributions,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matched_rules: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Scores one pair under a profile: the trained translator when present,
/// otherwise the strongest matching expert rule.
pub fn translate(input: &TranslationInput, profile: &ContextProfile) -> FakenessReport {
    let (score, path, contributions, matched_rules, warning) = match &profile.trained {
        Some(t) => {
            let x = translator_features(input, &profile.harm);
            let w = &t.model.weights;
            let c = Contributions {
                intention: w[0] * x[0],
                spatial: w[1] * x[1],
                temporal: w[2] * x[2],
                contextual: w[3] * x[3],
                keywords: w[4] * x[4],
                bias: t.model.bias,
            };
            (t.model.probability(&x), TranslationPath::Trained, c, Vec::new(), None)
        }
        None => {
            let mut c = Contributions::default();
            let mut score: f64 = 0.0;
            let mut matched = Vec::new();
            for rule in profile.rules.iter().filter(|r| r.condition.holds(input)) {
                let s = rule.score();
                score = score.max(s);
                matched.push(rule.name.clone());
                let mut channels = Vec::new();
                rule.condition.channels(&mut channels);
                for ch in channels {
                    let slot = match ch {
                        Channel::Spatial => &mut c.spatial,
                        Channel::Temporal => &mut c.temporal,
                        Channel::Contextual => &mut c.contextual,
                    };
                    *slot = slot.max(s);
                }
                if rule.condition.mentions_intention() {
                    c.intention = c.intention.max(s);
                }
            }
            let warning = matched.is_empty().then(|| "no applicable rule".to_string());
            (score, TranslationPath::Rules, c, matched, warning)
        }
    };
    let fakeness_score = score.clamp(0.0, 1.0);
    FakenessReport {
        record_id: input.record_id.clone(),
        intention: input.intention,
        fakeness_score,
        verdict: profile.thresholds.verdict(fakeness_score),
        path,
        contributions,
        matched_rules,
        warning,
    }
}

/// Fits the logistic translator on labeled examples (`true` = fake). The
/// intention coefficient is held non-negative so a worse intention never
/// lowers the score.
pub fn train_translator(
    labeled: &[(TranslationInput, bool)],
    harm: &HarmCoefficients,
    seed: u64,
) -> Result<TrainedTranslator> {
    if labeled.iter().all(|(_, y)| *y) || labeled.iter().all(|(_, y)| !*y) {
        return Err(Error::DegenerateLabels("translator needs both fake and genuine examples".into()));
    }
    let x: Vec<Vec<f64>> = labeled
        .iter()
        .map(|(i, _)| translator_features(i, harm).to_vec())
        .collect();
    let y: Vec<bool> = labeled.iter().map(|(_, y)| *y).collect();
    let fit = fit_logistic(&x, &y, &[true, false, false, false, false], &GradientConfig::default(), seed);
    if !fit.converged {
        log::warn!("translator stopped after {} iterations without converging", fit.iterations);
    }
    let correct = x
        .iter()
        .zip(&y)
        .filter(|(xi, yi)| (fit.model.probability(xi) >= 0.5) == **yi)
        .count();
    Ok(TrainedTranslator {
        training_accuracy: correct as f64 / x.len() as f64,
        model: fit.model,
    })
}
