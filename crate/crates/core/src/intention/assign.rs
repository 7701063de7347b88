use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::kmeans::{kmeans, Clustering, KMeansConfig};
use super::{IntentionLevel, IntentionPlane};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    BruteForce,
    Heuristic,
    Clustered,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::BruteForce, Strategy::Heuristic, Strategy::Clustered];

    pub fn short_name(self) -> &'static str {
        match self {
            Strategy::BruteForce => "brute",
            Strategy::Heuristic => "heur",
            Strategy::Clustered => "cluster",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" | "brute-force" => Ok(Strategy::BruteForce),
            "heur" | "heuristic" => Ok(Strategy::Heuristic),
            "cluster" | "clustered" => Ok(Strategy::Clustered),
            _ => Err(Error::InvalidConfig(format!("unknown strategy `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    /// Index into the plane list.
    pub plane: usize,
    pub level: IntentionLevel,
    pub distance: f64,
}

/// `a` beats `b`: nearer, then lower level, then lower plane index.
#[inline]
fn better(a: &Assignment, b: &Assignment) -> bool {
    (a.distance, a.level, a.plane) < (b.distance, b.level, b.plane)
}

#[inline]
fn candidate(p: [f64; 3], planes: &[IntentionPlane], i: usize) -> Assignment {
    Assignment {
        plane: i,
        level: planes[i].level,
        distance: planes[i].distance(p),
    }
}

/// Exact argmin over all planes.
pub fn nearest_plane(p: [f64; 3], planes: &[IntentionPlane]) -> Result<Assignment> {
    if planes.is_empty() {
        return Err(Error::NoPlanes);
    }
    let mut best = candidate(p, planes, 0);
    for i in 1..planes.len() {
        let c = candidate(p, planes, i);
        if better(&c, &best) {
            best = c;
        }
    }
    Ok(best)
}

/// Smallest gap between any two points of two planes in R³: `|d1 - d2|` for
/// parallel planes (unit normals equal to 1e-12), 0 otherwise.
pub fn plane_separation(p: &IntentionPlane, q: &IntentionPlane) -> f64 {
    let (p, q) = (p.normalized(), q.normalized());
    let same = (p.a - q.a).abs() <= 1e-12 && (p.b - q.b).abs() <= 1e-12 && (p.c - q.c).abs() <= 1e-12;
    if same {
        (p.d - q.d).abs()
    } else {
        0.0
    }
}

pub fn min_pairwise_separation(planes: &[IntentionPlane]) -> f64 {
    let mut min = f64::INFINITY;
    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            min = min.min(plane_separation(&planes[i], &planes[j]));
        }
    }
    min
}

/// Visits planes nearest-first from the corpus centroid and stops as soon as
/// the best distance is under half the minimum plane separation: by the
/// triangle inequality no other plane can then be closer.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicIndex {
    order: Vec<usize>,
    bound: f64,
}

impl HeuristicIndex {
    pub fn new(planes: &[IntentionPlane], centroid: [f64; 3]) -> Result<Self> {
        if planes.is_empty() {
            return Err(Error::NoPlanes);
        }
        let mut order: Vec<usize> = (0..planes.len()).collect();
        order.sort_by(|a, b| {
            planes[*a]
                .distance(centroid)
                .total_cmp(&planes[*b].distance(centroid))
                .then(a.cmp(b))
        });
        let sep = min_pairwise_separation(planes);
        let bound = if sep.is_finite() { sep / 2.0 } else { f64::INFINITY };
        Ok(Self { order, bound })
    }

    pub fn from_points(planes: &[IntentionPlane], points: &[[f64; 3]]) -> Result<Self> {
        Self::new(planes, centroid(points))
    }

    /// Half the minimum pairwise separation.
    pub fn early_exit_bound(&self) -> f64 {
        self.bound
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn assign(&self, p: [f64; 3], planes: &[IntentionPlane]) -> Assignment {
        let mut best = candidate(p, planes, self.order[0]);
        for &i in &self.order[1..] {
            if best.distance < self.bound {
                break;
            }
            let c = candidate(p, planes, i);
            if better(&c, &best) {
                best = c;
            }
        }
        best
    }
}

pub fn centroid(points: &[[f64; 3]]) -> [f64; 3] {
    let n = points.len().max(1) as f64;
    let mut c = [0.0; 3];
    for p in points {
        for k in 0..3 {
            c[k] += p[k];
        }
    }
    c.map(|x| x / n)
}

/// Clusters the points once, then classifies each centroid and broadcasts
/// the result to the cluster's members.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteredAssigner {
    pub clustering: Clustering,
    pub centroid_assignments: Vec<Assignment>,
}

impl ClusteredAssigner {
    /// Clustering is the training phase.
    pub fn fit(points: &[[f64; 3]], planes: &[IntentionPlane], config: &KMeansConfig) -> Result<Self> {
        if planes.is_empty() {
            return Err(Error::NoPlanes);
        }
        let k = config.resolve_k(points.len());
        let clustering = kmeans(points, k, config)?;
        let mut me = Self {
            clustering,
            centroid_assignments: Vec::new(),
        };
        me.classify_centroids(planes);
        Ok(me)
    }

    /// The scoring phase: one exact argmin per centroid.
    pub fn classify_centroids(&mut self, planes: &[IntentionPlane]) {
        self.centroid_assignments = self
            .clustering
            .centroids
            .iter()
            .map(|c| nearest_plane(*c, planes).expect("planes checked non-empty"))
            .collect();
    }

    pub fn broadcast(&self) -> Vec<Assignment> {
        self.clustering
            .assignments
            .iter()
            .map(|c| self.centroid_assignments[*c])
            .collect()
    }
}

/// Assigns every point to a plane. For the clustered strategy the reported
/// distance is the point's own distance to its cluster's plane.
pub fn assign_points(
    points: &[[f64; 3]],
    planes: &[IntentionPlane],
    strategy: Strategy,
    kmeans_config: &KMeansConfig,
) -> Result<Vec<Assignment>> {
    if planes.is_empty() {
        return Err(Error::NoPlanes);
    }
    if points.is_empty() {
        return Ok(Vec::new());
    }
    match strategy {
        Strategy::BruteForce => points.iter().map(|p| nearest_plane(*p, planes)).collect(),
        Strategy::Heuristic => {
            let index = HeuristicIndex::from_points(planes, points)?;
            Ok(points.iter().map(|p| index.assign(*p, planes)).collect())
        }
        Strategy::Clustered => {
            let mut config = kmeans_config.clone();
            let distinct = {
                let mut keys: Vec<[u64; 3]> = points.iter().map(|p| p.map(|x| (x + 0.0).to_bits())).collect();
                keys.sort_unstable();
                keys.dedup();
                keys.len()
            };
            config.k = Some(config.resolve_k(points.len()).min(distinct));
            let assigner = ClusteredAssigner::fit(points, planes, &config)?;
            Ok(assigner
                .broadcast()
                .into_iter()
                .zip(points)
                .map(|(a, p)| Assignment {
                    distance: planes[a.plane].distance(*p),
                    ..a
                })
                .collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use IntentionLevel::*;

    fn flat(h: f64, level: IntentionLevel) -> IntentionPlane {
        IntentionPlane::new(0.0, 0.0, 1.0, -h, level).unwrap()
    }

    #[test]
    fn point_on_plane_all_strategies() {
        let planes = vec![flat(0.1, WellIntention), flat(0.5, ModeratelyIll), flat(0.9, ExtremelyIll)];
        let pts = vec![[0.3, 0.2, 0.5], [0.1, 0.9, 0.1], [0.7, 0.7, 0.9]];
        for s in Strategy::ALL {
            let cfg = KMeansConfig {
                k: Some(3),
                ..KMeansConfig::default()
            };
            let out = assign_points(&pts, &planes, s, &cfg).unwrap();
            let levels: Vec<_> = out.iter().map(|a| a.level).collect();
            assert_eq!(levels, vec![ModeratelyIll, WellIntention, ExtremelyIll], "{s}");
            assert!(out.iter().all(|a| a.distance < 1e-15));
        }
    }

    #[test]
    fn ties_go_to_lower_level() {
        let planes = vec![flat(0.75, BorderLine), flat(0.25, WellIntention)];
        let a = nearest_plane([0.0, 0.0, 0.5], &planes).unwrap();
        assert_eq!(a.level, WellIntention);
        let idx = HeuristicIndex::new(&planes, [0.0, 0.0, 0.7]).unwrap();
        assert_eq!(idx.assign([0.0, 0.0, 0.5], &planes).level, WellIntention);
    }

    #[test]
    fn separation() {
        let planes = vec![flat(0.1, WellIntention), flat(0.5, BorderLine), flat(0.6, VeryIll)];
        assert!((min_pairwise_separation(&planes) - 0.1).abs() < 1e-12);
        let tilted = IntentionPlane::new(1.0, 0.0, 1.0, 0.0, BorderLine).unwrap();
        assert_eq!(plane_separation(&planes[0], &tilted), 0.0);
    }

    #[test]
    fn no_planes() {
        assert_eq!(nearest_plane([0.0; 3], &[]), Err(Error::NoPlanes));
    }
}
