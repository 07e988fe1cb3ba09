//! Truncated tensor algebra over the plane.
//!
//! A word `(i₁, …, i_k)` with letters in `{0, 1}` is stored at index
//! `Σ i_j · 2^(k−j)` of level `k`, so the first letter is the most significant
//! bit and numeric order coincides with lexicographic order.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Tolerance used when checking the constant term of group-like and Lie elements.
const UNIT_TOL: f64 = 1e-12;

/// Element of the tensor algebra over ℝ², truncated after level `depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSeries {
    levels: Vec<Vec<f64>>,
}

impl TensorSeries {
    /// The zero series.
    pub fn zeros(depth: usize) -> Self {
        let levels = (0..=depth).map(|k| vec![0.0; 1 << k]).collect();
        Self { levels }
    }

    /// The unit series `1 + 0 + 0 + …`, i.e. the signature of a constant path.
    pub fn identity(depth: usize) -> Self {
        let mut s = Self::zeros(depth);
        s.levels[0][0] = 1.0;
        s
    }

    /// Builds a series from explicit level data. Level `k` must have `2^k` entries.
    pub fn from_levels(levels: Vec<Vec<f64>>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::InvalidLevel(levels.len().saturating_sub(1)));
        }
        for (k, lvl) in levels.iter().enumerate() {
            if lvl.len() != 1 << k {
                return Err(Error::DimensionMismatch {
                    expected: 1 << k,
                    found: lvl.len(),
                });
            }
            if lvl.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("tensor coefficient"));
            }
        }
        Ok(Self { levels })
    }

    /// Truncation level `m`.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k]
    }

    pub fn level_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.levels[k]
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    /// Constant (level-0) coefficient.
    pub fn scalar(&self) -> f64 {
        self.levels[0][0]
    }

    /// Coefficient of a word given as a slice of letters in `{0, 1}`.
    pub fn coeff(&self, word: &[u8]) -> f64 {
        self.levels[word.len()][word_index(word)]
    }

    /// Largest absolute coefficient difference between two series of equal depth.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.depth(), other.depth());
        self.levels
            .iter()
            .flatten()
            .zip(other.levels.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Truncated tensor product `self ⊗ rhs`.
    pub fn tensor_mul(&self, rhs: &Self) -> Result<Self> {
        if self.depth() != rhs.depth() {
            return Err(Error::LevelMismatch {
                left: self.depth(),
                right: rhs.depth(),
            });
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let depth = self.depth();
        let mut out = Self::zeros(depth);
        for k in 0..=depth {
            let dst = &mut out.levels[k];
            for p in 0..=k {
                let q = k - p;
                let left = &self.levels[p];
                let right = &rhs.levels[q];
                for (ia, &a) in left.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    let base = ia << q;
                    for (ib, &b) in right.iter().enumerate() {
                        dst[base | ib] += a * b;
                    }
                }
            }
        }
        out
    }

    fn scaled(mut self, factor: f64) -> Self {
        self.levels.iter_mut().flatten().for_each(|v| *v *= factor);
        self
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let levels = self
            .levels
            .iter()
            .zip(&rhs.levels)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            .collect();
        Self { levels }
    }
}

impl Add for &TensorSeries {
    type Output = TensorSeries;
    fn add(self, rhs: &TensorSeries) -> TensorSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TensorSeries {
    type Output = TensorSeries;
    fn sub(self, rhs: &TensorSeries) -> TensorSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for TensorSeries {
    type Output = TensorSeries;
    fn mul(self, rhs: f64) -> TensorSeries {
        self.scaled(rhs)
    }
}

pub(crate) fn word_index(word: &[u8]) -> usize {
    word.iter().fold(0, |acc, &l| (acc << 1) | l as usize)
}

/// Signature of a single straight segment: the tensor exponential of its displacement.
///
/// Level `k` at word `(i₁…i_k)` equals `Δ^{i₁}⋯Δ^{i_k} / k!`.
pub fn segment_signature(displacement: [f64; 2], depth: usize) -> Result<TensorSeries> {
    if depth < 1 {
        return Err(Error::InvalidLevel(depth));
    }
    if displacement.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("segment displacement"));
    }
    let mut s = TensorSeries::identity(depth);
    for k in 1..=depth {
        let inv_k = 1.0 / k as f64;
        let (lower, upper) = s.levels.split_at_mut(k);
        let prev = &lower[k - 1];
        let cur = &mut upper[0];
        for (i, &p) in prev.iter().enumerate() {
            cur[i << 1] = p * displacement[0] * inv_k;
            cur[(i << 1) | 1] = p * displacement[1] * inv_k;
        }
    }
    Ok(s)
}

/// Concatenation of two path signatures (Chen's identity).
pub fn chen_concat(a: &TensorSeries, b: &TensorSeries) -> Result<TensorSeries> {
    for s in [a, b] {
        if (s.scalar() - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotGroupLike(s.scalar()));
        }
    }
    a.tensor_mul(b)
}

/// Signature of the piecewise-linear path through `points`, truncated at `depth`.
///
/// Zero-length segments contribute the identity and are skipped.
pub fn path_signature(points: &[[f64; 2]], depth: usize) -> Result<TensorSeries> {
    if depth < 1 {
        return Err(Error::InvalidLevel(depth));
    }
    if points.len() < 2 {
        return Err(Error::DegeneratePath(points.len()));
    }
    let mut sig = TensorSeries::identity(depth);
    for pair in points.windows(2) {
        let delta = [pair[1][0] - pair[0][0], pair[1][1] - pair[0][1]];
        if delta == [0.0, 0.0] {
            continue;
        }
        let seg = segment_signature(delta, depth)?;
        sig = sig.mul_unchecked(&seg);
    }
    Ok(sig)
}

/// Truncated tensor logarithm `Σ_{n≥1} (−1)^{n+1}/n · (s − 1)^{⊗n}` of a group-like series.
pub fn tensor_log(s: &TensorSeries) -> Result<TensorSeries> {
    if (s.scalar() - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotGroupLike(s.scalar()));
    }
    let depth = s.depth();
    let mut x = s.clone();
    x.levels[0][0] = 0.0;

    // Horner form: x(c₁ + x(c₂ + … + x·c_m)) with c_n = (−1)^{n+1}/n.
    let coeff = |n: usize| {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        sign / n as f64
    };
    let mut acc = TensorSeries::zeros(depth);
    acc.levels[0][0] = coeff(depth);
    for n in (1..depth).rev() {
        acc = x.mul_unchecked(&acc);
        acc.levels[0][0] += coeff(n);
    }
    let mut out = x.mul_unchecked(&acc);
    out.levels[0][0] = 0.0;
    Ok(out)
}

/// Truncated tensor exponential `Σ_{n≥0} x^{⊗n}/n!` of a series with zero constant term.
pub fn tensor_exp(x: &TensorSeries) -> Result<TensorSeries> {
    if x.scalar().abs() > UNIT_TOL {
        return Err(Error::NotLieElement(x.scalar().abs()));
    }
    let depth = x.depth();
    // Horner form: 1 + x(1 + x/2(1 + x/3(…))).
    let mut acc = TensorSeries::identity(depth);
    for n in (1..=depth).rev() {
        let mut term = x.mul_unchecked(&acc) * (1.0 / n as f64);
        term.levels[0][0] += 1.0;
        acc = term;
    }
    Ok(acc)
}
