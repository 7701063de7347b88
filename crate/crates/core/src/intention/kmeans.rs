use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    /// `None` picks `ceil(sqrt(N / 2))`.
    pub k: Option<usize>,
    pub seed: u64,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            k: None,
            seed: 0,
            max_iterations: 300,
            tolerance: 1e-9,
        }
    }
}

impl KMeansConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn resolve_k(&self, n: usize) -> usize {
        self.k.unwrap_or_else(|| default_k(n))
    }
}

pub fn default_k(n: usize) -> usize {
    ((n as f64 / 2.0).sqrt().ceil() as usize).max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub centroids: Vec<[f64; 3]>,
    /// Cluster index per input point.
    pub assignments: Vec<usize>,
    /// Within-cluster sum of squares after each assignment step.
    pub wcss_history: Vec<f64>,
    pub iterations: usize,
}

impl Clustering {
    pub fn wcss(&self) -> f64 {
        self.wcss_history.last().copied().unwrap_or(0.0)
    }
}

fn sq_dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

fn distinct_count(points: &[[f64; 3]]) -> usize {
    let mut keys: Vec<[u64; 3]> = points.iter().map(|p| p.map(|x| (x + 0.0).to_bits())).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

fn nearest(p: &[f64; 3], centroids: &[[f64; 3]]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = sq_dist(p, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Seeded k-means++ followed by Lloyd iterations.
pub fn kmeans(points: &[[f64; 3]], k: usize, config: &KMeansConfig) -> Result<Clustering> {
    if points.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let distinct = distinct_count(points);
    if k == 0 || k > distinct {
        return Err(Error::KTooLarge { k, distinct });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut centroids = vec![points[rng.gen_range(0..points.len())]];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let dist = WeightedIndex::new(&d2).expect("uncovered distinct points keep total weight positive");
        let c = points[dist.sample(&mut rng)];
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &c));
        }
        centroids.push(c);
    }

    let mut assignments = vec![0; points.len()];
    let mut wcss_history = Vec::new();
    let mut iterations = 0;
    loop {
        let mut wcss = 0.0;
        for (a, p) in assignments.iter_mut().zip(points) {
            let (j, d) = nearest(p, &centroids);
            *a = j;
            wcss += d;
        }
        wcss_history.push(wcss);
        if iterations >= config.max_iterations {
            break;
        }
        iterations += 1;

        let mut sums = vec![[0.0; 3]; k];
        let mut counts = vec![0usize; k];
        for (a, p) in assignments.iter().zip(points) {
            counts[*a] += 1;
            for i in 0..3 {
                sums[*a][i] += p[i];
            }
        }
        let mut shift: f64 = 0.0;
        for j in 0..k {
            if counts[j] == 0 {
                continue;
            }
            let next = sums[j].map(|s| s / counts[j] as f64);
            shift = shift.max(sq_dist(&next, &centroids[j]).sqrt());
            centroids[j] = next;
        }
        if shift < config.tolerance {
            let mut wcss = 0.0;
            for (a, p) in assignments.iter_mut().zip(points) {
                let (j, d) = nearest(p, &centroids);
                *a = j;
                wcss += d;
            }
            wcss_history.push(wcss);
            break;
        }
    }
    Ok(Clustering {
        centroids,
        assignments,
        wcss_history,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_one_is_the_mean() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.5]];
        let c = kmeans(&pts, 1, &KMeansConfig::default()).unwrap();
        let mean = [1.0 / 3.0, 1.0 / 3.0, 0.5 / 3.0];
        for i in 0..3 {
            assert!((c.centroids[0][i] - mean[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn k_equal_n_has_zero_wcss() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.5], [0.3, 0.3, 0.3]];
        let c = kmeans(&pts, 4, &KMeansConfig::default()).unwrap();
        assert_eq!(c.wcss(), 0.0);
    }

    #[test]
    fn too_many_clusters() {
        let pts = [[0.5, 0.5, 0.5], [0.5, 0.5, 0.5], [0.1, 0.1, 0.1]];
        assert_eq!(
            kmeans(&pts, 3, &KMeansConfig::default()),
            Err(Error::KTooLarge { k: 3, distinct: 2 })
        );
    }

    #[test]
    fn default_k_values() {
        assert_eq!(default_k(10_000), 71);
        assert_eq!(default_k(1), 1);
        assert_eq!(default_k(8), 2);
    }
}
