use serde::{Deserialize, Serialize};

use crate::attribute::ServicePair;
use crate::intention::{estimate_intention, IntentionLevel, IntentionModel, Strategy};
use crate::{Error, Result};

/// Rows are true levels, columns predicted levels, over `levels`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub levels: Vec<IntentionLevel>,
    pub counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn new(truth: &[IntentionLevel], predicted: &[IntentionLevel]) -> Self {
        let mut levels: Vec<IntentionLevel> = truth.iter().chain(predicted).copied().collect();
        levels.sort();
        levels.dedup();
        let mut counts = vec![vec![0; levels.len()]; levels.len()];
        for (t, p) in truth.iter().zip(predicted) {
            let i = levels.binary_search(t).expect("collected");
            let j = levels.binary_search(p).expect("collected");
            counts[i][j] += 1;
        }
        Self { levels, counts }
    }

    pub fn row_total(&self, level: IntentionLevel) -> usize {
        self.levels
            .binary_search(&level)
            .map(|i| self.counts[i].iter().sum())
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub accuracy: f64,
    pub correct: usize,
    pub total: usize,
    pub confusion: ConfusionMatrix,
}

pub fn accuracy(truth: &[IntentionLevel], predicted: &[IntentionLevel]) -> Result<AccuracyReport> {
    if truth.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if truth.len() != predicted.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: predicted.len(),
        });
    }
    let correct = truth.iter().zip(predicted).filter(|(t, p)| t == p).count();
    Ok(AccuracyReport {
        accuracy: correct as f64 / truth.len() as f64,
        correct,
        total: truth.len(),
        confusion: ConfusionMatrix::new(truth, predicted),
    })
}

/// Share of predicted-ill samples (moderately-ill or worse) that are
/// truly ill.
pub fn precision_ill(truth: &[IntentionLevel], predicted: &[IntentionLevel]) -> Result<f64> {
    if truth.len() != predicted.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: predicted.len(),
        });
    }
    let flagged: Vec<bool> = truth
        .iter()
        .zip(predicted)
        .filter(|(_, p)| p.is_ill())
        .map(|(t, _)| t.is_ill())
        .collect();
    if flagged.is_empty() {
        return Err(Error::NoPredictedIll);
    }
    Ok(flagged.iter().filter(|x| **x).count() as f64 / flagged.len() as f64)
}

pub fn predict(model: &IntentionModel, pairs: &[ServicePair], strategy: Strategy) -> Result<Vec<IntentionLevel>> {
    Ok(estimate_intention(pairs, model, strategy)?
        .into_iter()
        .map(|e| e.level)
        .collect())
}

pub fn evaluate_accuracy(
    model: &IntentionModel,
    pairs: &[ServicePair],
    truth: &[IntentionLevel],
    strategy: Strategy,
) -> Result<AccuracyReport> {
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    accuracy(truth, &predict(model, pairs, strategy)?)
}

pub fn evaluate_precision(
    model: &IntentionModel,
    pairs: &[ServicePair],
    truth: &[IntentionLevel],
    strategy: Strategy,
) -> Result<f64> {
    precision_ill(truth, &predict(model, pairs, strategy)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use IntentionLevel::*;

    #[test]
    fn perfect_and_planted_errors() {
        let truth: Vec<_> = (0..20).map(|i| if i < 10 { VeryIll } else { WellIntention }).collect();
        assert_eq!(precision_ill(&truth, &truth).unwrap(), 1.0);
        let mut pred = truth.clone();
        // 9 true-ill + 1 false-ill among predicted-ill
        pred[0] = WellIntention;
        pred[10] = ModeratelyIll;
        assert!((precision_ill(&truth, &pred).unwrap() - 0.9).abs() < 1e-15);
        let acc = accuracy(&truth, &pred).unwrap();
        assert_eq!(acc.correct, 18);
        for l in [WellIntention, VeryIll] {
            assert_eq!(acc.confusion.row_total(l), 10);
        }
    }

    #[test]
    fn undefined_precision() {
        let t = vec![WellIntention, BorderLine];
        assert_eq!(precision_ill(&t, &t), Err(Error::NoPredictedIll));
        assert_eq!(accuracy(&[], &[]), Err(Error::EmptyCorpus));
    }
}
