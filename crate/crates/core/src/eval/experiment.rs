use serde::{Deserialize, Serialize};

use super::metrics::{accuracy, precision_ill, predict};
use crate::attribute::ServicePair;
use crate::intention::{Embedding, IntentionLevel, IntentionModel, Strategy, TrainConfig};
use crate::{Error, Result};

/// Deterministic split: every `holdout`-th pair (by position) goes to the
/// test side.
pub fn split<T: Clone>(items: &[T], holdout: usize) -> (Vec<T>, Vec<T>) {
    let holdout = holdout.max(2);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, x) in items.iter().enumerate() {
        if i % holdout == holdout - 1 {
            test.push(x.clone());
        } else {
            train.push(x.clone());
        }
    }
    (train, test)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub planes: usize,
    pub strategy: Strategy,
    pub accuracy: f64,
    /// `None` when nothing was predicted ill.
    pub precision_ill: Option<f64>,
}

/// Trains one model per plane count and scores the test pairs with every
/// strategy. Accuracy is measured against the uncollapsed test labels.
pub fn plane_sweep(
    train: (&[ServicePair], &[IntentionLevel]),
    test: (&[ServicePair], &[IntentionLevel]),
    plane_counts: &[usize],
    strategies: &[Strategy],
    config: &TrainConfig,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &planes in plane_counts {
        let cfg = TrainConfig {
            plane_count: Some(planes),
            ..config.clone()
        };
        let model = IntentionModel::train(train.0, train.1, &cfg)?;
        for &strategy in strategies {
            let predicted = predict(&model, test.0, strategy)?;
            let precision = match precision_ill(test.1, &predicted) {
                Ok(p) => Some(p),
                Err(Error::NoPredictedIll) => None,
                Err(e) => return Err(e),
            };
            rows.push(SweepRow {
                planes,
                strategy,
                accuracy: accuracy(test.1, &predicted)?.accuracy,
                precision_ill: precision,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineRow {
    pub embedding: Embedding,
    pub planes: usize,
    pub strategy: Strategy,
    pub accuracy: f64,
}

/// The same pipeline twice, once with latent (LSA) semantic channels and
/// once with the raw weighted token vectors in their place.
pub fn baseline_comparison(
    train: (&[ServicePair], &[IntentionLevel]),
    test: (&[ServicePair], &[IntentionLevel]),
    plane_count: usize,
    strategies: &[Strategy],
    config: &TrainConfig,
) -> Result<Vec<BaselineRow>> {
    let mut rows = Vec::new();
    for embedding in [Embedding::Lsa, Embedding::Raw] {
        let cfg = TrainConfig {
            embedding,
            ..config.clone()
        };
        for r in plane_sweep(train, test, &[plane_count], strategies, &cfg)? {
            rows.push(BaselineRow {
                embedding,
                planes: r.planes,
                strategy: r.strategy,
                accuracy: r.accuracy,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_is_positional() {
        let (a, b) = split(&[0, 1, 2, 3, 4, 5], 3);
        assert_eq!(a, vec![0, 1, 3, 4]);
        assert_eq!(b, vec![2, 5]);
    }
}
