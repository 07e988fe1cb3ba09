use std::fmt;
use std::str::FromStr;

use crate::codebook::FeatureMatrix;
use crate::error::{Error, Result};

/// Dissimilarity between feature matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Manhattan,
    Chi2,
}

impl Metric {
    pub fn distance(self, u: &FeatureMatrix, v: &FeatureMatrix) -> Result<f64> {
        match self {
            Metric::Manhattan => manhattan_distance(u, v),
            Metric::Chi2 => chi2_distance(u, v),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Manhattan => "manhattan",
            Metric::Chi2 => "chi2",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "manhattan" | "l1" => Ok(Metric::Manhattan),
            "chi2" => Ok(Metric::Chi2),
            other => Err(Error::Config(format!("unknown metric '{other}'"))),
        }
    }
}

fn check_sizes(u: &FeatureMatrix, v: &FeatureMatrix) -> Result<()> {
    if u.size() != v.size() {
        return Err(Error::DimensionMismatch {
            expected: u.size(),
            found: v.size(),
        });
    }
    Ok(())
}

/// `Σ |Uᵢⱼ − Vᵢⱼ|`.
pub fn manhattan_distance(u: &FeatureMatrix, v: &FeatureMatrix) -> Result<f64> {
    check_sizes(u, v)?;
    Ok(u.as_slice().iter().zip(v.as_slice()).map(|(a, b)| (a - b).abs()).sum())
}

/// `Σ (Uᵢⱼ − Vᵢⱼ)² / (Uᵢⱼ + Vᵢⱼ)`; cells where both entries are zero contribute nothing.
pub fn chi2_distance(u: &FeatureMatrix, v: &FeatureMatrix) -> Result<f64> {
    check_sizes(u, v)?;
    Ok(u.as_slice()
        .iter()
        .zip(v.as_slice())
        .filter(|(a, b)| *a + *b > 0.0)
        .map(|(a, b)| (a - b) * (a - b) / (a + b))
        .sum())
}
