//! Lyndon basis of the free Lie algebra on two generators.
//!
//! Each Lyndon word `w` is bracketed by its standard factorization `w = uv`
//! (`v` the longest proper Lyndon suffix), `P(w) = [P(u), P(v)]`, with
//! `[a, b] = a⊗b − b⊗a`. Under this convention the level-2 coefficient of a
//! log-signature is `(S¹² − S²¹)/2`.
//!
//! `P(w)` expands to `w` plus strictly lexicographically larger words of the
//! same length, so projection is a forward triangular solve.

use std::fmt;

use super::tensor::{word_index, TensorSeries};
use crate::error::{Error, Result};

/// Tag identifying the basis and bracket convention, persisted with codebooks.
pub const BASIS_CONVENTION: &str = "lyndon-d2/std-factorization/[a,b]=ab-ba";

/// Reconstruction residual above which a projected series is rejected as not
/// being a Lie element, relative to the largest coefficient of each level.
pub const LIE_RESIDUAL_TOL: f64 = 1e-8;

/// A Lyndon word over `{0, 1}` with its bracket expansion in the tensor algebra.
#[derive(Debug, Clone)]
pub struct LyndonWord {
    letters: Vec<u8>,
    expansion: Vec<f64>,
}

impl LyndonWord {
    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Dense coefficients of `P(w)` at level `len()`.
    pub fn expansion(&self) -> &[f64] {
        &self.expansion
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l + 1)?;
        }
        Ok(())
    }
}

/// Lyndon basis up to a truncation level, ordered by length then lexicographically.
#[derive(Debug, Clone)]
pub struct HallBasis {
    depth: usize,
    words: Vec<LyndonWord>,
}

impl HallBasis {
    pub fn new(depth: usize) -> Result<Self> {
        if depth < 1 {
            return Err(Error::InvalidLevel(depth));
        }
        let mut raw = lyndon_words(depth);
        raw.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let words = raw
            .into_iter()
            .map(|letters| {
                let expansion = bracket_expansion(&letters);
                LyndonWord { letters, expansion }
            })
            .collect();
        Ok(Self { depth, words })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn words(&self) -> &[LyndonWord] {
        &self.words
    }

    /// Total number of basis elements (log-signature dimension).
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    /// Number of basis elements of each length `1..=depth`.
    pub fn level_dims(&self) -> Vec<usize> {
        let mut dims = vec![0; self.depth];
        for w in &self.words {
            dims[w.len() - 1] += 1;
        }
        dims
    }

    /// Length of each basis element, in basis order.
    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().map(LyndonWord::len)
    }

    /// Coordinates of a Lie element in this basis.
    pub fn project(&self, lie: &TensorSeries) -> Result<LogSigVector> {
        if lie.depth() != self.depth {
            return Err(Error::LevelMismatch {
                left: self.depth,
                right: lie.depth(),
            });
        }
        if lie.scalar().abs() > LIE_RESIDUAL_TOL {
            return Err(Error::NotLieElement(lie.scalar().abs()));
        }
        let mut coeffs = vec![0.0; self.words.len()];
        let mut start = 0;
        for k in 1..=self.depth {
            let end = start + self.words[start..].iter().take_while(|w| w.len() == k).count();
            let level = lie.level(k);
            // words within a level are already in increasing lexicographic order
            for j in start..end {
                let target = word_index(&self.words[j].letters);
                let mut c = level[target];
                for (ci, wi) in coeffs[start..j].iter().zip(&self.words[start..j]) {
                    c -= ci * wi.expansion[target];
                }
                coeffs[j] = c;
            }
            start = end;
        }
        let vector = LogSigVector {
            coeffs,
            depth: self.depth,
        };
        // relative per level: coefficients of long paths grow like length^k
        let expanded = self.expand(&vector)?;
        let residual = (1..=self.depth)
            .map(|k| {
                let scale = lie.level(k).iter().fold(1f64, |m, v| m.max(v.abs()));
                let diff = expanded
                    .level(k)
                    .iter()
                    .zip(lie.level(k))
                    .fold(0f64, |m, (a, b)| m.max((a - b).abs()));
                diff / scale
            })
            .fold(0f64, f64::max);
        if residual.is_nan() || residual > LIE_RESIDUAL_TOL {
            return Err(Error::NotLieElement(residual));
        }
        Ok(vector)
    }

    /// Embeds basis coordinates back into the tensor algebra.
    pub fn expand(&self, v: &LogSigVector) -> Result<TensorSeries> {
        if v.coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.coeffs.len(),
            });
        }
        let mut out = TensorSeries::zeros(self.depth);
        for (w, &c) in self.words.iter().zip(&v.coeffs) {
            let level = out.level_mut(w.len());
            for (dst, &e) in level.iter_mut().zip(&w.expansion) {
                *dst += c * e;
            }
        }
        Ok(out)
    }
}

/// Log-signature coordinates in the Lyndon basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LogSigVector {
    pub coeffs: Vec<f64>,
    pub depth: usize,
}

impl LogSigVector {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Log-signature dimension for planar paths at each level `1..=depth` (Witt's formula).
pub fn witt_dims(depth: usize) -> Vec<usize> {
    (1..=depth)
        .map(|k| {
            let sum: i64 = (1..=k)
                .filter(|d| k % d == 0)
                .map(|d| mobius(d) * (1i64 << (k / d)))
                .sum();
            (sum / k as i64) as usize
        })
        .collect()
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Duval's algorithm: all Lyndon words over `{0, 1}` of length `1..=max_len`.
fn lyndon_words(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    while !w.is_empty() {
        out.push(w.clone());
        let n = w.len();
        while w.len() < max_len {
            let c = w[w.len() - n];
            w.push(c);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

fn is_lyndon(w: &[u8]) -> bool {
    (1..w.len()).all(|i| w < &w[i..])
}

fn bracket_expansion(word: &[u8]) -> Vec<f64> {
    if word.len() == 1 {
        let mut e = vec![0.0; 2];
        e[word[0] as usize] = 1.0;
        return e;
    }
    let split = (1..word.len())
        .find(|&i| is_lyndon(&word[i..]))
        .expect("a Lyndon word of length ≥ 2 has a proper Lyndon suffix");
    let (u, v) = word.split_at(split);
    let eu = bracket_expansion(u);
    let ev = bracket_expansion(v);
    let mut out = vec![0.0; 1 << word.len()];
    let (lu, lv) = (u.len(), v.len());
    for (i, &a) in eu.iter().enumerate() {
        for (j, &b) in ev.iter().enumerate() {
            out[(i << lv) | j] += a * b;
            out[(j << lu) | i] -= a * b;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::tensor::{path_signature, tensor_log};

    #[test]
    fn witt_formula_dims() {
        assert_eq!(witt_dims(6), vec![2, 1, 2, 3, 6, 9]);
    }

    #[test]
    fn basis_level_dims_match_witt() {
        for m in 1..=7 {
            let b = HallBasis::new(m).unwrap();
            assert_eq!(b.level_dims(), witt_dims(m));
        }
        assert_eq!(HallBasis::new(2).unwrap().dim(), 3);
        assert_eq!(HallBasis::new(3).unwrap().dim(), 5);
        assert_eq!(HallBasis::new(4).unwrap().dim(), 8);
    }

    #[test]
    fn basis_order() {
        let b = HallBasis::new(4).unwrap();
        let names: Vec<String> = b.words().iter().map(|w| w.to_string()).collect();
        assert_eq!(names, ["1", "2", "12", "112", "122", "1112", "1122", "1222"]);
    }

    #[test]
    fn level_two_bracket_expansion() {
        let b = HallBasis::new(2).unwrap();
        // [e1, e2] = e12 − e21; index order 11, 12, 21, 22
        assert_eq!(b.words()[2].expansion(), &[0.0, 1.0, -1.0, 0.0]);
    }

    #[test]
    fn expansion_is_unitriangular() {
        let b = HallBasis::new(6).unwrap();
        for w in b.words() {
            let lead = word_index(w.letters());
            assert_eq!(w.expansion()[lead], 1.0, "{w}");
            assert!(w.expansion()[..lead].iter().all(|&c| c == 0.0), "{w}");
        }
    }

    #[test]
    fn l_shape_projection() {
        let s = path_signature(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]], 2).unwrap();
        let v = HallBasis::new(2).unwrap().project(&tensor_log(&s).unwrap()).unwrap();
        assert_eq!(v.len(), 3);
        for (got, want) in v.coeffs.iter().zip([1.0, 1.0, 0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn straight_segment_has_zero_bracket() {
        let s = path_signature(&[[0.0, 0.0], [2.0, 3.0]], 2).unwrap();
        let v = HallBasis::new(2).unwrap().project(&tensor_log(&s).unwrap()).unwrap();
        assert!(v.coeffs[2].abs() < 1e-15);
    }

    #[test]
    fn rejects_non_lie_input() {
        let b = HallBasis::new(2).unwrap();
        let mut x = TensorSeries::zeros(2);
        x.level_mut(2)[0] = 1.0; // e11 is symmetric, not in the Lie algebra
        assert!(matches!(b.project(&x), Err(Error::NotLieElement(_))));
        let s = path_signature(&[[0.0, 0.0], [2.0, 3.0]], 2).unwrap();
        assert!(b.project(&s).is_err());
    }

    #[test]
    fn projection_round_trip() {
        let pts = [[0.0, 0.0], [1.0, 0.2], [0.4, 1.1], [-0.5, 0.3], [0.2, -0.7]];
        for m in 1..=5 {
            let b = HallBasis::new(m).unwrap();
            let l = tensor_log(&path_signature(&pts, m).unwrap()).unwrap();
            let back = b.expand(&b.project(&l).unwrap()).unwrap();
            assert!(back.max_abs_diff(&l) < 1e-10);
        }
    }
}
