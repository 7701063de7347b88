use serde::{Deserialize, Serialize};

use super::IntentionLevel;
use crate::regression::{fit_softmax, GradientConfig, Softmax};
use crate::{Error, Result};

pub const MIN_SAMPLES_PER_LEVEL: usize = 4;

/// Multinomial logistic map from a (weighted) modification point to a level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theta {
    pub levels: Vec<IntentionLevel>,
    pub model: Softmax,
}

impl Theta {
    pub fn probabilities(&self, p: [f64; 3]) -> Vec<(IntentionLevel, f64)> {
        self.levels.iter().copied().zip(self.model.probabilities(&p)).collect()
    }

    pub fn predict(&self, p: [f64; 3]) -> IntentionLevel {
        self.levels[self.model.predict(&p)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaFit {
    pub theta: Theta,
    pub training_accuracy: f64,
    pub loss: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn fit_theta(labeled: &[([f64; 3], IntentionLevel)], seed: u64, config: &GradientConfig) -> Result<ThetaFit> {
    let mut levels: Vec<IntentionLevel> = labeled.iter().map(|(_, l)| *l).collect();
    levels.sort();
    levels.dedup();
    if levels.len() < 2 {
        return Err(Error::DegenerateLabels(format!(
            "{} distinct level(s); need at least 2",
            levels.len()
        )));
    }
    for level in &levels {
        let count = labeled.iter().filter(|(_, l)| l == level).count();
        if count < MIN_SAMPLES_PER_LEVEL {
            return Err(Error::InsufficientSamples {
                level: *level,
                count,
                needed: MIN_SAMPLES_PER_LEVEL,
            });
        }
    }
    let x: Vec<Vec<f64>> = labeled.iter().map(|(p, _)| p.to_vec()).collect();
    let y: Vec<usize> = labeled
        .iter()
        .map(|(_, l)| levels.binary_search(l).expect("level collected above"))
        .collect();
    let fit = fit_softmax(&x, &y, levels.len(), config, seed);
    if !fit.converged {
        log::warn!(
            "intention regression stopped after {} iterations without converging; keeping best iterate",
            fit.iterations
        );
    }
    let theta = Theta {
        levels,
        model: fit.model,
    };
    let correct = labeled.iter().filter(|(p, l)| theta.predict(*p) == *l).count();
    Ok(ThetaFit {
        training_accuracy: correct as f64 / labeled.len() as f64,
        theta,
        loss: fit.loss,
        iterations: fit.iterations,
        converged: fit.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use IntentionLevel::*;

    fn separable() -> Vec<([f64; 3], IntentionLevel)> {
        (0..16)
            .map(|i| {
                let j = (i % 8) as f64 * 0.02;
                if i < 8 {
                    ([0.1 + j, 0.1, 0.1 + j], WellIntention)
                } else {
                    ([0.7 + j, 0.8, 0.9 - j], VeryIll)
                }
            })
            .collect()
    }

    #[test]
    fn separable_fits_perfectly_and_deterministically() {
        let a = fit_theta(&separable(), 7, &GradientConfig::default()).unwrap();
        let b = fit_theta(&separable(), 7, &GradientConfig::default()).unwrap();
        assert_eq!(a.training_accuracy, 1.0);
        assert_eq!(a.theta, b.theta);
    }

    #[test]
    fn degenerate_and_sparse_labels() {
        let one: Vec<_> = separable().into_iter().take(8).collect();
        assert!(matches!(fit_theta(&one, 0, &GradientConfig::default()), Err(Error::DegenerateLabels(_))));
        let mut few = separable();
        few.truncate(11);
        assert_eq!(
            fit_theta(&few, 0, &GradientConfig::default()),
            Err(Error::InsufficientSamples {
                level: VeryIll,
                count: 3,
                needed: 4
            })
        );
    }
}
