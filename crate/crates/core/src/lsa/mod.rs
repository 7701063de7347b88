//! Latent semantic analysis over image-attribute matrices.
//!
//! Each channel gets its own space: the records × tokens matrix is factored
//! with a truncated SVD and records are compared by cosine distance between
//! their latent vectors.

mod vectorize;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::attribute::{ImageServiceRecord, ServicePair};
use crate::delta::ChannelDelta;
use crate::linalg::{Matrix, Svd};
use crate::{Error, Result};

pub use vectorize::{build_matrix, channel_tokens, VectorizerConfig, Weighting};

pub const SPACE_FORMAT: &str = "metatrust-semantic-space";
pub const SPACE_VERSION: u32 = 1;

/// How many latent concepts to keep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "rule", content = "value")]
pub enum RankRule {
    Fixed(usize),
    /// Smallest r whose leading singular values carry at least this share
    /// of the squared spectrum.
    Energy(f64),
}

impl Default for RankRule {
    fn default() -> Self {
        RankRule::Energy(0.90)
    }
}

impl RankRule {
    pub fn select(&self, singular_values: &[f64]) -> Result<usize> {
        let max = singular_values.len();
        match *self {
            RankRule::Fixed(r) if r == 0 || r > max => {
                Err(Error::InvalidConfig(format!("fixed rank {r} outside 1..={max}")))
            }
            RankRule::Fixed(r) => Ok(r),
            RankRule::Energy(theta) if !(theta > 0.0 && theta <= 1.0) => Err(Error::InvalidConfig(format!(
                "energy threshold {theta} outside (0, 1]"
            ))),
            RankRule::Energy(theta) => {
                let total: f64 = singular_values.iter().map(|s| s * s).sum();
                let mut acc = 0.0;
                for (i, s) in singular_values.iter().enumerate() {
                    acc += s * s;
                    if acc / total >= theta - 1e-12 {
                        return Ok(i + 1);
                    }
                }
                Ok(max)
            }
        }
    }
}

/// A record's coordinates over a space's latent concepts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentVector(pub Vec<f64>);

impl LatentVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0.0)
    }
}

/// Truncated factorization `M ≈ U diag(S) Vᵀ` of one channel's matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticSpace {
    pub format: String,
    pub version: u32,
    pub config: VectorizerConfig,
    pub rank: usize,
    /// m × r image-aspect matrix.
    pub u: Matrix,
    /// r singular values, non-increasing.
    pub s: Vec<f64>,
    /// n × r attribute-aspect matrix.
    pub v: Matrix,
}

pub fn fit_space(matrix: &Matrix, rank_rule: RankRule, config: VectorizerConfig) -> Result<SemanticSpace> {
    SemanticSpace::fit(matrix, rank_rule, config)
}

impl SemanticSpace {
    pub fn fit(matrix: &Matrix, rank_rule: RankRule, config: VectorizerConfig) -> Result<Self> {
        if matrix.rows() == 0 || matrix.cols() == 0 {
            return Err(Error::EmptyCorpus);
        }
        if matrix.is_zero() {
            return Err(Error::ZeroMatrix);
        }
        if matrix.cols() != config.vocabulary.len() {
            return Err(Error::DimensionMismatch {
                expected: config.vocabulary.len(),
                got: matrix.cols(),
            });
        }
        let svd = Svd::compute(matrix);
        let rank = rank_rule.select(&svd.s)?;
        Ok(Self {
            format: SPACE_FORMAT.into(),
            version: SPACE_VERSION,
            config,
            rank,
            u: svd.u.leading_columns(rank),
            s: svd.s[..rank].to_vec(),
            v: svd.v.leading_columns(rank),
        })
    }

    /// A space whose latent vectors are the raw weighted rows themselves
    /// (no factorization): `V` is the identity and every singular value 1.
    pub fn identity(config: VectorizerConfig) -> Result<Self> {
        let n = config.vocabulary.len();
        if n == 0 {
            return Err(Error::EmptyVocabulary);
        }
        Ok(Self {
            format: SPACE_FORMAT.into(),
            version: SPACE_VERSION,
            config,
            rank: n,
            u: Matrix::zeros(0, n),
            s: vec![1.0; n],
            v: Matrix::identity(n),
        })
    }

    /// Builds the matrix for `records` under `config` and fits it.
    pub fn fit_records(records: &[ImageServiceRecord], config: VectorizerConfig, rank_rule: RankRule) -> Result<Self> {
        let (matrix, _) = build_matrix(records, &config)?;
        Self::fit(&matrix, rank_rule, config)
    }

    /// Folds a row into the latent space: `x V diag(S)⁻¹`.
    pub fn embed(&self, row: &[f64]) -> Result<LatentVector> {
        if row.len() != self.v.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.v.rows(),
                got: row.len(),
            });
        }
        if let Some(index) = self.s.iter().position(|s| *s == 0.0) {
            return Err(Error::RankDeficient { index });
        }
        let mut out = vec![0.0; self.rank];
        for (i, x) in row.iter().enumerate() {
            if *x == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += x * self.v[(i, k)];
            }
        }
        for (o, s) in out.iter_mut().zip(&self.s) {
            *o /= s;
        }
        Ok(LatentVector(out))
    }

    pub fn embed_record(&self, record: &ImageServiceRecord) -> Result<LatentVector> {
        self.embed(&self.config.vectorize(record))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("space serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let space: SemanticSpace = serde_json::from_str(text)?;
        space.check_version()?;
        Ok(space)
    }

    pub(crate) fn check_version(&self) -> Result<()> {
        if self.format != SPACE_FORMAT || self.version != SPACE_VERSION {
            return Err(Error::VersionMismatch {
                expected: format!("{SPACE_FORMAT}/{SPACE_VERSION}"),
                found: format!("{}/{}", self.format, self.version),
            });
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// `1 - cos(a, b)`; an all-zero vector on either side is at distance 1.
pub fn semantic_distance(a: &LatentVector, b: &LatentVector) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(cosine_distance(&a.0, &b.0))
}

pub(crate) fn cosine_distance(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    (1.0 - dot / (na * nb)).clamp(0.0, 2.0)
}

/// Semantic delta of the space's channel between the two sides of a pair.
/// Identical channel content is distance 0; both sides empty is a missing
/// channel.
pub fn channel_semantic_delta(pair: &ServicePair, space: &SemanticSpace) -> Result<ChannelDelta> {
    let channel = space.config.channel;
    let mut a = channel_tokens(&pair.original, channel);
    let mut b = channel_tokens(&pair.candidate, channel);
    if a.is_empty() && b.is_empty() {
        return Err(Error::MissingChannel(channel.name()));
    }
    let va = space.embed(&space.config.vectorize_tokens(&a))?;
    let vb = space.embed(&space.config.vectorize_tokens(&b))?;
    a.sort();
    b.sort();
    if a == b {
        return Ok(ChannelDelta::semantic(0.0));
    }
    Ok(ChannelDelta::semantic(semantic_distance(&va, &vb)?))
}
