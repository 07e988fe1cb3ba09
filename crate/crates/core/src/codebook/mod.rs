//! Codebook learning over log-signature features and document feature matrices.

mod io;
mod kmeans;
mod matrix;

pub use io::{read_matrix, write_matrix, MatrixRecord, CODEBOOK_FORMAT_VERSION, MATRIX_FORMAT_VERSION};
pub use kmeans::{kmeans, nearest, squared_distance, KMeansConfig, KMeansResult};
pub use matrix::FeatureMatrix;

use std::fmt;

use crate::error::{Error, Result};
use crate::pathlets::{LpsFeature, PairOrientation, RescaleBounds};
use crate::signature::BASIS_CONVENTION;

/// Everything that determines how a page turns into features. Fixed at
/// training time and persisted with the codebook.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureParams {
    pub epsilon: f64,
    pub pathlet_size: usize,
    pub level: usize,
    pub orientation: PairOrientation,
    pub min_perimeter: usize,
    pub include_holes: bool,
    pub invert: bool,
    pub seed: u64,
}

/// Centroids in rescaled log-signature space plus the bounds used for rescaling.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub params: FeatureParams,
    pub bounds: RescaleBounds,
    pub centroids: Vec<Vec<f64>>,
    pub basis_convention: String,
}

/// SHA-256 of a codebook's serialized form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fingerprint(pub [u8; 32]);

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0[..8] {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl Codebook {
    pub fn new(params: FeatureParams, bounds: RescaleBounds, centroids: Vec<Vec<f64>>) -> Result<Self> {
        if centroids.len() < 2 {
            return Err(Error::Config(format!("codebook needs at least 2 codes, got {}", centroids.len())));
        }
        let dim = bounds.dim();
        for c in &centroids {
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.len(),
                });
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("centroid"));
            }
        }
        Ok(Self {
            params,
            bounds,
            centroids,
            basis_convention: BASIS_CONVENTION.to_string(),
        })
    }

    /// Learns rescale bounds and `size` centroids from a pool of raw features.
    pub fn train(params: FeatureParams, pool: &[LpsFeature], size: usize, restarts: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::Config(format!("codebook size must be >= 2, got {size}")));
        }
        if pool.len() < size {
            return Err(Error::InsufficientData(format!(
                "training pool has {} features, codebook size is {size}",
                pool.len()
            )));
        }
        let bounds = RescaleBounds::fit(pool)?;
        let scaled = pool.iter().map(|f| bounds.apply(f)).collect::<Result<Vec<_>>>()?;
        let cfg = KMeansConfig {
            restarts,
            ..KMeansConfig::new(size, params.seed)
        };
        let res = kmeans(&scaled, &cfg)?;
        log::info!(
            "k-means: {} codes, {} iterations, inertia {:.4}",
            size,
            res.iterations,
            res.inertia
        );
        Self::new(params, bounds, res.centroids)
    }

    /// Number of codes `M`.
    pub fn size(&self) -> usize {
        self.centroids.len()
    }

    /// Feature dimension `D`.
    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    /// Nearest centroid to an already rescaled feature; ties go to the lowest index.
    pub fn nearest_code(&self, feature: &LpsFeature) -> Result<usize> {
        if feature.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: feature.dim(),
            });
        }
        Ok(nearest(&feature.coeffs, &self.centroids).0)
    }

    /// Rescales a raw feature with the stored bounds and quantizes it.
    pub fn quantize_raw(&self, raw: &LpsFeature) -> Result<usize> {
        self.nearest_code(&self.bounds.apply(raw)?)
    }

    /// Feature matrix of rescaled `(backward, forward)` feature pairs.
    pub fn build_feature_matrix(&self, pairs: &[(LpsFeature, LpsFeature)]) -> Result<FeatureMatrix> {
        let codes = pairs
            .iter()
            .map(|(b, f)| Ok((self.nearest_code(b)?, self.nearest_code(f)?)))
            .collect::<Result<Vec<_>>>()?;
        FeatureMatrix::from_codes(self.size(), &codes)
    }

    pub fn fingerprint(&self) -> Fingerprint {
        use sha2::{Digest, Sha256};
        Fingerprint(Sha256::digest(self.to_bytes()).into())
    }
}

/// Free-function form of [`Codebook::build_feature_matrix`].
pub fn build_feature_matrix(pairs: &[(LpsFeature, LpsFeature)], codebook: &Codebook) -> Result<FeatureMatrix> {
    codebook.build_feature_matrix(pairs)
}

/// Free-function form of [`Codebook::nearest_code`].
pub fn nearest_code(feature: &LpsFeature, codebook: &Codebook) -> Result<usize> {
    codebook.nearest_code(feature)
}

#[cfg(test)]
pub(crate) fn test_params() -> FeatureParams {
    FeatureParams {
        epsilon: 1.0,
        pathlet_size: 4,
        level: 3,
        orientation: PairOrientation::Traversal,
        min_perimeter: 10,
        include_holes: true,
        invert: false,
        seed: 0,
    }
}
