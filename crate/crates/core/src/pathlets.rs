//! Pathlets: short windows of consecutive polygon vertices, their hinged
//! pairs, and the length-normalized log-signature feature describing them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::polyline::Polyline;
use crate::signature::{log_signature, HallBasis};

/// A window of `w` consecutive vertices of one polygonized contour.
#[derive(Debug, Clone, PartialEq)]
pub struct Pathlet {
    pub points: Vec<[f64; 2]>,
    pub contour: usize,
    pub anchor: usize,
}

/// Two pathlets meeting at a common contour vertex (the hinge).
#[derive(Debug, Clone, PartialEq)]
pub struct PathletPair {
    pub backward: Pathlet,
    pub forward: Pathlet,
}

/// How the backward pathlet of a pair is traversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairOrientation {
    /// Both pathlets follow contour order; the hinge ends the backward one.
    #[default]
    Traversal,
    /// Both pathlets start at the hinge and run away from it.
    Outward,
}

impl PairOrientation {
    pub fn as_str(self) -> &'static str {
        match self {
            PairOrientation::Traversal => "traversal",
            PairOrientation::Outward => "outward",
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            PairOrientation::Traversal => 0,
            PairOrientation::Outward => 1,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(PairOrientation::Traversal),
            1 => Some(PairOrientation::Outward),
            _ => None,
        }
    }
}

impl fmt::Display for PairOrientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairOrientation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "traversal" => Ok(PairOrientation::Traversal),
            "outward" => Ok(PairOrientation::Outward),
            other => Err(Error::Config(format!("unknown pair orientation '{other}'"))),
        }
    }
}

fn check_size(w: usize) -> Result<()> {
    if w < 3 {
        return Err(Error::Config(format!("pathlet size must be >= 3, got {w}")));
    }
    Ok(())
}

fn window(contour: &Polyline, start: usize, w: usize) -> Vec<[f64; 2]> {
    let n = contour.len();
    (0..w).map(|k| contour.points[(start + k) % n]).collect()
}

/// Sliding windows of `w` vertices with stride 1.
///
/// Rings yield one pathlet per vertex (windows wrap around); open polylines
/// yield `n − w + 1`. Polylines with fewer than `w` vertices yield nothing.
pub fn extract_pathlets(contour: &Polyline, contour_id: usize, w: usize) -> Result<Vec<Pathlet>> {
    check_size(w)?;
    let n = contour.len();
    if n < w {
        return Ok(Vec::new());
    }
    let anchors = if contour.closed { n } else { n - w + 1 };
    Ok((0..anchors)
        .map(|i| Pathlet {
            points: window(contour, i, w),
            contour: contour_id,
            anchor: i,
        })
        .collect())
}

/// One hinged pair per contour vertex.
///
/// For hinge `i` the backward pathlet covers vertices `i−w+1 ..= i` and the
/// forward one `i ..= i+w−1`. Rings need at least `2w − 1` vertices so the two
/// windows do not overlap beyond the hinge; open polylines use only hinges
/// with room on both sides.
pub fn extract_pairs(
    contour: &Polyline,
    contour_id: usize,
    w: usize,
    orientation: PairOrientation,
) -> Result<Vec<PathletPair>> {
    check_size(w)?;
    let n = contour.len();
    if n < 2 * w - 1 {
        return Ok(Vec::new());
    }
    let hinges: Vec<usize> = if contour.closed {
        (0..n).collect()
    } else {
        (w - 1..=n - w).collect()
    };
    Ok(hinges
        .into_iter()
        .map(|i| {
            let back_start = (i + n - (w - 1)) % n;
            let mut back = window(contour, back_start, w);
            if orientation == PairOrientation::Outward {
                back.reverse();
            }
            PathletPair {
                backward: Pathlet {
                    points: back,
                    contour: contour_id,
                    anchor: back_start,
                },
                forward: Pathlet {
                    points: window(contour, i, w),
                    contour: contour_id,
                    anchor: i,
                },
            }
        })
        .collect())
}

/// Log-signature feature of a pathlet; rescaled into `[−1, 1]` once bounds are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct LpsFeature {
    pub coeffs: Vec<f64>,
}

impl LpsFeature {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }
}

impl AsRef<[f64]> for LpsFeature {
    fn as_ref(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Computes length-normalized log-signature features for pathlets of a fixed size.
///
/// Each level-`k` coordinate is divided by `L^k`, `L` the pathlet's arc length,
/// which makes the feature invariant to scaling as well as translation.
#[derive(Debug, Clone)]
pub struct LpsExtractor {
    basis: HallBasis,
    pathlet_size: usize,
}

impl LpsExtractor {
    pub fn new(pathlet_size: usize, level: usize) -> Result<Self> {
        check_size(pathlet_size)?;
        if level <= 1 || level >= pathlet_size {
            return Err(Error::Config(format!(
                "truncation level must satisfy 1 < m < w, got m={level}, w={pathlet_size}"
            )));
        }
        let basis = HallBasis::new(level)?;
        Ok(Self { basis, pathlet_size })
    }

    pub fn level(&self) -> usize {
        self.basis.depth()
    }

    pub fn pathlet_size(&self) -> usize {
        self.pathlet_size
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    /// Feature of a point window before rescaling.
    pub fn feature(&self, points: &[[f64; 2]]) -> Result<LpsFeature> {
        if points.len() != self.pathlet_size {
            return Err(Error::DimensionMismatch {
                expected: self.pathlet_size,
                found: points.len(),
            });
        }
        let length = Polyline::open(points.to_vec()).arc_length();
        if length.is_nan() || length <= 0.0 {
            return Err(Error::DegeneratePath(1));
        }
        // Level-k coordinates scale like length^k, so computing on the
        // translated, unit-length pathlet equals dividing them by L^k.
        let origin = points[0];
        let unit: Vec<[f64; 2]> = points
            .iter()
            .map(|p| [(p[0] - origin[0]) / length, (p[1] - origin[1]) / length])
            .collect();
        Ok(LpsFeature {
            coeffs: log_signature(&unit, &self.basis)?.coeffs,
        })
    }
}

/// Pre-rescale feature of a single pathlet at truncation level `level`.
pub fn lps_feature(pathlet: &Pathlet, level: usize) -> Result<LpsFeature> {
    LpsExtractor::new(pathlet.points.len(), level)?.feature(&pathlet.points)
}

/// Per-dimension `[min, max]` of the training pool, mapped affinely onto `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaleBounds {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl RescaleBounds {
    pub fn fit<F: AsRef<[f64]>>(pool: &[F]) -> Result<Self> {
        let first = pool
            .first()
            .ok_or_else(|| Error::InsufficientData("cannot fit rescale bounds on an empty pool".into()))?;
        let dim = first.as_ref().len();
        let mut min = vec![f64::INFINITY; dim];
        let mut max = vec![f64::NEG_INFINITY; dim];
        for f in pool {
            let f = f.as_ref();
            if f.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.len(),
                });
            }
            for (j, &v) in f.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite("training feature"));
                }
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Ok(Self { min, max })
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    /// Maps into `[−1, 1]`, clamping values outside the training range.
    /// Constant dimensions map to 0.
    pub fn apply(&self, f: &LpsFeature) -> Result<LpsFeature> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: f.dim(),
            });
        }
        let coeffs = f
            .coeffs
            .iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&v, (&lo, &hi))| {
                if hi > lo {
                    (2.0 * (v - lo) / (hi - lo) - 1.0).clamp(-1.0, 1.0)
                } else {
                    0.0
                }
            })
            .collect();
        Ok(LpsFeature { coeffs })
    }
}
