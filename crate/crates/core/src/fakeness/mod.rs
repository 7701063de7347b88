//! Turning intention into a context-specific fakeness verdict.

mod profile;
mod tfidf;
mod weights;

pub use profile::{
    train_translator, translate, translator_features, Condition, ContextProfile, Contributions, ExpertRule,
    FakenessReport, HarmCoefficients, Thresholds, TrainedTranslator, TranslationInput, TranslationPath, Verdict,
};
pub use tfidf::{keyword_feature, keyword_significance, modified_keywords, KeywordStats};
pub use weights::{resolve_weight, Significance, WeightRule, WEIGHT_RULES};
