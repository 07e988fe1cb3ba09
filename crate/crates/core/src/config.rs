use std::fmt;
use std::str::FromStr;

use crate::codebook::FeatureParams;
use crate::error::{Error, Result};
use crate::identify::Metric;
use crate::imageproc::DEFAULT_MIN_PERIMETER;
use crate::pathlets::PairOrientation;

/// Metric selection; `Auto` picks χ² for fine polygonization and Manhattan otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricChoice {
    #[default]
    Auto,
    Manhattan,
    Chi2,
}

/// Tolerances at or below this use χ² under [`MetricChoice::Auto`].
pub const AUTO_CHI2_MAX_EPSILON: f64 = 0.5;

impl MetricChoice {
    pub fn resolve(self, epsilon: f64) -> Metric {
        match self {
            MetricChoice::Manhattan => Metric::Manhattan,
            MetricChoice::Chi2 => Metric::Chi2,
            MetricChoice::Auto if epsilon <= AUTO_CHI2_MAX_EPSILON => Metric::Chi2,
            MetricChoice::Auto => Metric::Manhattan,
        }
    }
}

impl FromStr for MetricChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MetricChoice::Auto),
            other => other.parse::<Metric>().map(|m| match m {
                Metric::Manhattan => MetricChoice::Manhattan,
                Metric::Chi2 => MetricChoice::Chi2,
            }),
        }
    }
}

impl fmt::Display for MetricChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricChoice::Auto => "auto",
            MetricChoice::Manhattan => "manhattan",
            MetricChoice::Chi2 => "chi2",
        })
    }
}

/// Full set of knobs for training, featurization and matching.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Polygonization tolerance in pixels.
    pub epsilon: f64,
    /// Vertices per pathlet (`w`).
    pub pathlet_size: usize,
    /// Signature truncation level (`m`), `1 < m < w`.
    pub level: usize,
    /// Number of codes (`M`).
    pub codebook_size: usize,
    pub metric: MetricChoice,
    pub orientation: PairOrientation,
    pub seed: u64,
    pub min_perimeter: usize,
    /// Upper bound on the k-means training pool; larger pools are subsampled.
    pub subsample_cap: usize,
    pub include_holes: bool,
    /// Treat light strokes on a dark background as ink.
    pub invert: bool,
    pub restarts: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            epsilon: 1.0,
            pathlet_size: 4,
            level: 3,
            codebook_size: 48,
            metric: MetricChoice::Auto,
            orientation: PairOrientation::Traversal,
            seed: 0,
            min_perimeter: DEFAULT_MIN_PERIMETER,
            subsample_cap: 500_000,
            include_holes: true,
            invert: false,
            restarts: 1,
        }
    }
}

impl PipelineConfig {
    /// Smaller pathlets and codebook, for documents with little ink.
    pub fn small_ink() -> Self {
        Self {
            pathlet_size: 3,
            level: 2,
            codebook_size: 32,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(Error::Config(format!("epsilon must be finite and >= 0, got {}", self.epsilon)));
        }
        if self.pathlet_size < 3 {
            return Err(Error::Config(format!("pathlet size must be >= 3, got {}", self.pathlet_size)));
        }
        if self.level <= 1 || self.level >= self.pathlet_size {
            return Err(Error::Config(format!(
                "truncation level must satisfy 1 < m < w, got m={} w={}",
                self.level, self.pathlet_size
            )));
        }
        if self.codebook_size < 2 {
            return Err(Error::Config(format!("codebook size must be >= 2, got {}", self.codebook_size)));
        }
        if self.subsample_cap < self.codebook_size {
            return Err(Error::Config("subsample cap is smaller than the codebook size".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be >= 1".into()));
        }
        Ok(())
    }

    pub fn metric(&self) -> Metric {
        self.metric.resolve(self.epsilon)
    }

    pub fn feature_params(&self) -> FeatureParams {
        FeatureParams {
            epsilon: self.epsilon,
            pathlet_size: self.pathlet_size,
            level: self.level,
            orientation: self.orientation,
            min_perimeter: self.min_perimeter,
            include_holes: self.include_holes,
            invert: self.invert,
            seed: self.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = PipelineConfig::default();
        c.validate().unwrap();
        assert_eq!((c.pathlet_size, c.level, c.codebook_size), (4, 3, 48));
        assert_eq!(c.epsilon, 1.0);
        assert_eq!(c.metric(), Metric::Manhattan);
        PipelineConfig::small_ink().validate().unwrap();
    }

    #[test]
    fn level_constraint() {
        for (w, m, ok) in [(4, 3, true), (4, 4, false), (4, 1, false), (3, 2, true), (5, 4, true)] {
            let c = PipelineConfig {
                pathlet_size: w,
                level: m,
                ..Default::default()
            };
            assert_eq!(c.validate().is_ok(), ok, "w={w} m={m}");
        }
    }

    #[test]
    fn other_constraints() {
        let bad = [
            PipelineConfig { epsilon: -1.0, ..Default::default() },
            PipelineConfig { codebook_size: 1, ..Default::default() },
            PipelineConfig { restarts: 0, ..Default::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err());
        }
    }

    #[test]
    fn auto_metric_rule() {
        assert_eq!(MetricChoice::Auto.resolve(0.2), Metric::Chi2);
        assert_eq!(MetricChoice::Auto.resolve(1.0), Metric::Manhattan);
        assert_eq!(MetricChoice::Auto.resolve(2.0), Metric::Manhattan);
        assert_eq!(MetricChoice::Manhattan.resolve(0.2), Metric::Manhattan);
        assert_eq!("chi2".parse::<MetricChoice>().unwrap(), MetricChoice::Chi2);
    }
}
