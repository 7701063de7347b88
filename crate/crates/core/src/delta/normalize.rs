use serde::{Deserialize, Serialize};

use super::DeltaVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationMode {
    /// Min-max within each channel over the corpus.
    #[default]
    PerChannel,
    /// One min and max pooled over all three channels.
    Pooled,
}

/// Normalized change, each component in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedDelta {
    pub dz_hat: f64,
    pub dt_hat: f64,
    pub dc_hat: f64,
}

impl NormalizedDelta {
    pub const ORIGIN: NormalizedDelta = NormalizedDelta {
        dz_hat: 0.0,
        dt_hat: 0.0,
        dc_hat: 0.0,
    };

    pub fn to_array(self) -> [f64; 3] {
        [self.dz_hat, self.dt_hat, self.dc_hat]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self {
            dz_hat: a[0],
            dt_hat: a[1],
            dc_hat: a[2],
        }
    }
}

/// Min-max bounds fitted on a corpus; kept with a trained model so new
/// records map into the same scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationBounds {
    pub mode: NormalizationMode,
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl NormalizationBounds {
    pub fn fit(deltas: &[DeltaVector], mode: NormalizationMode) -> Result<Self> {
        if deltas.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut min = [f64::INFINITY; 3];
        let mut max = [f64::NEG_INFINITY; 3];
        for d in deltas {
            for (i, v) in d.values().into_iter().enumerate() {
                min[i] = min[i].min(v);
                max[i] = max[i].max(v);
            }
        }
        if mode == NormalizationMode::Pooled {
            let lo = min.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = max.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            min = [lo; 3];
            max = [hi; 3];
        }
        Ok(Self { mode, min, max })
    }

    /// Maps raw values into [0, 1]; a degenerate channel (max = min) maps
    /// to 0 and out-of-range values are clamped.
    pub fn apply(&self, delta: &DeltaVector) -> NormalizedDelta {
        let v = delta.values();
        let mut out = [0.0; 3];
        for i in 0..3 {
            let span = self.max[i] - self.min[i];
            out[i] = if span > 0.0 {
                ((v[i] - self.min[i]) / span).clamp(0.0, 1.0)
            } else {
                0.0
            };
        }
        NormalizedDelta::from_array(out)
    }
}

pub fn normalize_deltas(deltas: &[DeltaVector], mode: NormalizationMode) -> Result<Vec<NormalizedDelta>> {
    let bounds = NormalizationBounds::fit(deltas, mode)?;
    Ok(deltas.iter().map(|d| bounds.apply(d)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::ChannelDelta;

    fn dv(z: f64, t: f64, c: f64) -> DeltaVector {
        DeltaVector {
            spatial: ChannelDelta::quantitative(z),
            temporal: ChannelDelta::quantitative(t),
            contextual: ChannelDelta::quantitative(c),
        }
    }

    #[test]
    fn min_max_per_channel() {
        let out = normalize_deltas(
            &[dv(10.0, 1.0, 0.0), dv(20.0, 1.0, 0.5), dv(30.0, 1.0, 1.0)],
            NormalizationMode::PerChannel,
        )
        .unwrap();
        let z: Vec<f64> = out.iter().map(|n| n.dz_hat).collect();
        assert_eq!(z, vec![0.0, 0.5, 1.0]);
        // constant channel is degenerate
        assert!(out.iter().all(|n| n.dt_hat == 0.0));
    }

    #[test]
    fn pooled_mode_shares_bounds() {
        let bounds = NormalizationBounds::fit(&[dv(5.0, 0.0, 100.0)], NormalizationMode::Pooled).unwrap();
        assert_eq!(bounds.min, [0.0; 3]);
        assert_eq!(bounds.max, [100.0; 3]);
        let n = bounds.apply(&dv(5.0, 0.0, 100.0));
        assert!((n.dz_hat - 0.05).abs() < 1e-15);
        assert_eq!(n.dc_hat, 1.0);
    }

    #[test]
    fn empty_corpus() {
        assert_eq!(normalize_deltas(&[], NormalizationMode::PerChannel), Err(Error::EmptyCorpus));
    }

    #[test]
    fn clamps_outside_fitted_range() {
        let bounds = NormalizationBounds::fit(&[dv(0.0, 0.0, 0.0), dv(10.0, 10.0, 1.0)], NormalizationMode::PerChannel)
            .unwrap();
        let n = bounds.apply(&dv(20.0, -5.0, 0.5));
        assert_eq!(n.to_array(), [1.0, 0.0, 0.5]);
    }
}
