use serde::{Deserialize, Serialize};

use super::IntentionLevel;
use crate::linalg::{Matrix, Svd};
use crate::{Error, Result};

/// A normalized modification in `(dz_hat, dt_hat, dc_hat)` space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModificationPoint {
    pub record_id: String,
    pub dz_hat: f64,
    pub dt_hat: f64,
    pub dc_hat: f64,
}

impl ModificationPoint {
    pub fn new(record_id: impl Into<String>, p: [f64; 3]) -> Self {
        Self {
            record_id: record_id.into(),
            dz_hat: p[0],
            dt_hat: p[1],
            dc_hat: p[2],
        }
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.dz_hat, self.dt_hat, self.dc_hat]
    }
}

/// `a·dz + b·dt + c·dc + d = 0`, kept with a unit normal whose first nonzero
/// component is positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntentionPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub level: IntentionLevel,
}

impl IntentionPlane {
    pub fn new(a: f64, b: f64, c: f64, d: f64, level: IntentionLevel) -> Result<Self> {
        let norm = (a * a + b * b + c * c).sqrt();
        if !norm.is_finite() || norm <= 0.0 || !d.is_finite() {
            return Err(Error::InvalidConfig("plane normal must be nonzero and finite".into()));
        }
        let first = [a, b, c].into_iter().find(|x| *x != 0.0).unwrap_or(1.0);
        // an already-unit normal is left untouched so normalizing is idempotent
        let norm = if (norm - 1.0).abs() <= 4.0 * f64::EPSILON { 1.0 } else { norm };
        let s = if first < 0.0 { -norm } else { norm };
        Ok(Self {
            a: a / s + 0.0,
            b: b / s + 0.0,
            c: c / s + 0.0,
            d: d / s + 0.0,
            level,
        })
    }

    pub fn normal(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Re-applies the normalization; a no-op on planes built through `new`.
    pub fn normalized(&self) -> Self {
        Self::new(self.a, self.b, self.c, self.d, self.level).expect("stored plane has a nonzero normal")
    }

    pub fn distance(&self, p: [f64; 3]) -> f64 {
        point_plane_distance(p, self)
    }

    pub fn area(&self) -> Result<f64> {
        plane_area(self)
    }
}

/// `|a x + b y + c z + d| / sqrt(a² + b² + c²)`; valid for unnormalized
/// coefficients too.
pub fn point_plane_distance(p: [f64; 3], plane: &IntentionPlane) -> f64 {
    let num = plane.a * p[0] + plane.b * p[1] + plane.c * p[2] + plane.d;
    num.abs() / (plane.a * plane.a + plane.b * plane.b + plane.c * plane.c).sqrt()
}

/// Integral of the plane's `dc` height over the unit square of `(dz, dt)`.
pub fn plane_area(plane: &IntentionPlane) -> Result<f64> {
    if plane.c == 0.0 {
        return Err(Error::VerticalPlane);
    }
    Ok(-(plane.a / 2.0 + plane.b / 2.0 + plane.d) / plane.c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneFit {
    pub plane: IntentionPlane,
    pub residual_rms: f64,
    pub samples: usize,
}

/// Orthogonal least-squares plane: the normal is the direction of least
/// variance of the centered points.
pub fn fit_plane(points: &[[f64; 3]], level: IntentionLevel) -> Result<PlaneFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientSamples {
            level,
            count: points.len(),
            needed: 3,
        });
    }
    let n = points.len() as f64;
    let mut centroid = [0.0; 3];
    for p in points {
        for k in 0..3 {
            centroid[k] += p[k] / n;
        }
    }
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|p| (0..3).map(|k| p[k] - centroid[k]).collect())
        .collect();
    let svd = Svd::compute(&Matrix::from_rows(&rows));
    let scale = svd.s[0].max(f64::MIN_POSITIVE);
    if svd.s[0] == 0.0 || svd.s[1] <= scale * 1e-10 {
        return Err(Error::CollinearClass(level));
    }
    let normal = svd.v.column(2);
    let d = -(normal[0] * centroid[0] + normal[1] * centroid[1] + normal[2] * centroid[2]);
    let plane = IntentionPlane::new(normal[0], normal[1], normal[2], d, level)?;
    let rss: f64 = points.iter().map(|p| plane.distance(*p).powi(2)).sum();
    Ok(PlaneFit {
        plane,
        residual_rms: (rss / n).sqrt(),
        samples: points.len(),
    })
}

/// One plane per level present in `labeled`, in ascending level order.
pub fn fit_planes(labeled: &[([f64; 3], IntentionLevel)]) -> Result<Vec<PlaneFit>> {
    let mut levels: Vec<IntentionLevel> = labeled.iter().map(|(_, l)| *l).collect();
    levels.sort();
    levels.dedup();
    if levels.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    levels
        .into_iter()
        .map(|level| {
            let pts: Vec<[f64; 3]> = labeled.iter().filter(|(_, l)| *l == level).map(|(p, _)| *p).collect();
            fit_plane(&pts, level)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use IntentionLevel::*;

    #[test]
    fn distance_examples() {
        let z0 = IntentionPlane::new(0.0, 0.0, 1.0, 0.0, WellIntention).unwrap();
        assert_eq!(z0.distance([0.2, 0.3, 0.5]), 0.5);
        let diag = IntentionPlane {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            d: -1.0,
            level: WellIntention,
        };
        assert!((point_plane_distance([1.0, 1.0, 1.0], &diag) - 2.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn normalization_sign_and_idempotence() {
        let p = IntentionPlane::new(0.0, -2.0, 2.0, 1.0, BorderLine).unwrap();
        assert!(p.b > 0.0);
        assert!((p.a * p.a + p.b * p.b + p.c * p.c - 1.0).abs() < 1e-15);
        assert_eq!(p.normalized(), p);
        assert!(IntentionPlane::new(0.0, 0.0, 0.0, 1.0, BorderLine).is_err());
    }

    #[test]
    fn area_examples() {
        let flat = IntentionPlane::new(0.0, 0.0, 1.0, -0.5, WellIntention).unwrap();
        assert_eq!(flat.area().unwrap(), 0.5);
        let tilted = IntentionPlane::new(1.0, 0.0, -1.0, 0.0, WellIntention).unwrap();
        assert!((tilted.area().unwrap() - 0.5).abs() < 1e-15);
        let floor = IntentionPlane::new(0.0, 0.0, 1.0, 0.0, WellIntention).unwrap();
        assert_eq!(floor.area().unwrap(), 0.0);
        let wall = IntentionPlane::new(1.0, 0.0, 0.0, -0.5, WellIntention).unwrap();
        assert_eq!(wall.area(), Err(Error::VerticalPlane));
    }

    #[test]
    fn exact_horizontal_fit() {
        let pts = [[0.1, 0.2, 0.5], [0.9, 0.1, 0.5], [0.4, 0.8, 0.5], [0.6, 0.6, 0.5]];
        let fit = fit_plane(&pts, VeryIll).unwrap();
        assert!((fit.plane.c - 1.0).abs() < 1e-12);
        assert!((fit.plane.d + 0.5).abs() < 1e-12);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn collinear_rejected() {
        let pts = [[0.0, 0.0, 0.0], [0.5, 0.5, 0.5], [1.0, 1.0, 1.0]];
        assert_eq!(fit_plane(&pts, VeryIll), Err(Error::CollinearClass(VeryIll)));
    }
}
