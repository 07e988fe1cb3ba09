use crate::error::{Error, Result};

/// Normalized `M × M` co-occurrence histogram of quantized pathlet pairs.
///
/// Row index is the backward pathlet's code, column the forward one's.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    size: usize,
    data: Vec<f64>,
    pair_count: u64,
}

impl FeatureMatrix {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            data: vec![0.0; size * size],
            pair_count: 0,
        }
    }

    /// Counts `(backward, forward)` code pairs and normalizes to unit sum.
    pub fn from_codes(size: usize, codes: &[(usize, usize)]) -> Result<Self> {
        let mut counts = vec![0u64; size * size];
        for &(a, b) in codes {
            if a >= size || b >= size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: a.max(b) + 1,
                });
            }
            counts[a * size + b] += 1;
        }
        let total = codes.len() as u64;
        if total == 0 {
            log::warn!("feature matrix built from zero pathlet pairs");
            return Ok(Self::zeros(size));
        }
        let data = counts.into_iter().map(|c| c as f64 / total as f64).collect();
        Ok(Self {
            size,
            data,
            pair_count: total,
        })
    }

    /// Wraps raw entries, e.g. read back from disk.
    pub fn from_raw(size: usize, data: Vec<f64>, pair_count: u64) -> Result<Self> {
        if data.len() != size * size {
            return Err(Error::DimensionMismatch {
                expected: size * size,
                found: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::NonFinite("feature matrix entry"));
        }
        Ok(Self {
            size,
            data,
            pair_count,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn pair_count(&self) -> u64 {
        self.pair_count
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.size + col]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let n = self.size;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Self {
            size: n,
            data,
            pair_count: self.pair_count,
        }
    }
}
