//! Full-batch gradient-descent logistic models shared by the intention
//! regression and the fakeness translator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientConfig {
    pub learning_rate: f64,
    pub max_iterations: usize,
    pub l2: f64,
    /// Stop once the largest gradient component falls below this.
    pub tolerance: f64,
}

impl Default for GradientConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            max_iterations: 5000,
            l2: 1e-4,
            tolerance: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome<T> {
    pub model: T,
    pub loss: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Softmax regression: `weights[k]` and `bias[k]` per class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Softmax {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl Softmax {
    pub fn logits(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(w, b)| b + w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }

    pub fn probabilities(&self, x: &[f64]) -> Vec<f64> {
        softmax(&self.logits(x))
    }

    /// Most probable class; ties resolve to the lower index.
    pub fn predict(&self, x: &[f64]) -> usize {
        let z = self.logits(x);
        let mut best = 0;
        for (k, v) in z.iter().enumerate() {
            if *v > z[best] {
                best = k;
            }
        }
        best
    }
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

fn init(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-0.01..0.01)).collect()
}

pub fn fit_softmax(
    x: &[Vec<f64>],
    y: &[usize],
    classes: usize,
    config: &GradientConfig,
    seed: u64,
) -> FitOutcome<Softmax> {
    let dim = x.first().map_or(0, Vec::len);
    let n = x.len() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = Softmax {
        weights: (0..classes).map(|_| init(&mut rng, dim)).collect(),
        bias: init(&mut rng, classes),
    };
    let mut best = (f64::INFINITY, model.clone());
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        let mut gw = vec![vec![0.0; dim]; classes];
        let mut gb = vec![0.0; classes];
        let mut loss = 0.0;
        for (xi, yi) in x.iter().zip(y) {
            let p = model.probabilities(xi);
            loss -= p[*yi].max(1e-300).ln();
            for k in 0..classes {
                let r = p[k] - if k == *yi { 1.0 } else { 0.0 };
                gb[k] += r / n;
                for j in 0..dim {
                    gw[k][j] += r * xi[j] / n;
                }
            }
        }
        loss /= n;
        let mut gmax: f64 = 0.0;
        for k in 0..classes {
            for j in 0..dim {
                loss += 0.5 * config.l2 * model.weights[k][j].powi(2);
                gw[k][j] += config.l2 * model.weights[k][j];
                gmax = gmax.max(gw[k][j].abs());
            }
            gmax = gmax.max(gb[k].abs());
        }
        if loss < best.0 {
            best = (loss, model.clone());
        }
        if gmax < config.tolerance {
            converged = true;
            break;
        }
        for k in 0..classes {
            for j in 0..dim {
                model.weights[k][j] -= config.learning_rate * gw[k][j];
            }
            model.bias[k] -= config.learning_rate * gb[k];
        }
        iterations += 1;
    }
    FitOutcome {
        model: best.1,
        loss: best.0,
        iterations,
        converged,
    }
}

/// Binary logistic regression with optional non-negativity constraints on
/// individual coefficients (enforced by projection after each step).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Logistic {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl Logistic {
    pub fn logit(&self, x: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }

    pub fn probability(&self, x: &[f64]) -> f64 {
        sigmoid(self.logit(x))
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

pub fn fit_logistic(
    x: &[Vec<f64>],
    y: &[bool],
    non_negative: &[bool],
    config: &GradientConfig,
    seed: u64,
) -> FitOutcome<Logistic> {
    let dim = x.first().map_or(0, Vec::len);
    let n = x.len() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = Logistic {
        weights: init(&mut rng, dim),
        bias: rng.gen_range(-0.01..0.01),
    };
    project(&mut model, non_negative);
    let mut best = (f64::INFINITY, model.clone());
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        let mut gw = vec![0.0; dim];
        let mut gb = 0.0;
        let mut loss = 0.0;
        for (xi, yi) in x.iter().zip(y) {
            let p = model.probability(xi);
            let t = if *yi { 1.0 } else { 0.0 };
            loss -= t * p.max(1e-300).ln() + (1.0 - t) * (1.0 - p).max(1e-300).ln();
            gb += (p - t) / n;
            for j in 0..dim {
                gw[j] += (p - t) * xi[j] / n;
            }
        }
        loss /= n;
        for j in 0..dim {
            loss += 0.5 * config.l2 * model.weights[j].powi(2);
            gw[j] += config.l2 * model.weights[j];
        }
        if loss < best.0 {
            best = (loss, model.clone());
        }
        // projected gradient: a clamped coordinate pushing further out is stationary
        let gmax = gw
            .iter()
            .enumerate()
            .map(|(j, g)| {
                if non_negative.get(j).copied().unwrap_or(false) && model.weights[j] == 0.0 && *g > 0.0 {
                    0.0
                } else {
                    g.abs()
                }
            })
            .fold(gb.abs(), f64::max);
        if gmax < config.tolerance {
            converged = true;
            break;
        }
        for j in 0..dim {
            model.weights[j] -= config.learning_rate * gw[j];
        }
        model.bias -= config.learning_rate * gb;
        project(&mut model, non_negative);
        iterations += 1;
    }
    FitOutcome {
        model: best.1,
        loss: best.0,
        iterations,
        converged,
    }
}

fn project(model: &mut Logistic, non_negative: &[bool]) {
    for (w, nn) in model.weights.iter_mut().zip(non_negative) {
        if *nn && *w < 0.0 {
            *w = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmax_separates_two_blobs() {
        let x: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let base = if i < 10 { 0.1 } else { 0.9 };
                vec![base + 0.01 * (i % 10) as f64, base, base]
            })
            .collect();
        let y: Vec<usize> = (0..20).map(|i| usize::from(i >= 10)).collect();
        let fit = fit_softmax(&x, &y, 2, &GradientConfig::default(), 3);
        assert!(x.iter().zip(&y).all(|(xi, yi)| fit.model.predict(xi) == *yi));
    }

    #[test]
    fn logistic_conflicting_labels_give_half() {
        let x = vec![vec![1.0], vec![1.0]];
        let y = vec![true, false];
        let fit = fit_logistic(&x, &y, &[false], &GradientConfig::default(), 1);
        assert!((fit.model.probability(&[1.0]) - 0.5).abs() < 1e-4);
    }

    #[test]
    fn non_negative_projection_holds() {
        let x = vec![vec![0.0], vec![1.0], vec![0.1], vec![0.9]];
        let y = vec![true, false, true, false];
        let fit = fit_logistic(&x, &y, &[true], &GradientConfig::default(), 1);
        assert_eq!(fit.model.weights[0], 0.0);
    }
}
