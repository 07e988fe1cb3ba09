//! Independent reference implementations used to check the library.
#![allow(dead_code)]

use std::cmp::Ordering;

use pathlet_core::{BinaryImage, FeatureMatrix, Metric};
use rand::Rng;

pub fn random_polyline<R: Rng>(rng: &mut R, points: std::ops::Range<usize>, step: f64) -> Vec<[f64; 2]> {
    let n = rng.random_range(points);
    let mut p = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
    let mut out = vec![p];
    for _ in 1..n {
        p = [p[0] + rng.random_range(-step..step), p[1] + rng.random_range(-step..step)];
        out.push(p);
    }
    out
}

/// Signature levels `0..=depth` by direct numerical integration of the
/// iterated-integral recursion `dS^{w·i} = S^w dX^i`, using the trapezoidal
/// rule on `steps` uniform sub-steps distributed over the segments by length.
pub fn quadrature_signature(points: &[[f64; 2]], depth: usize, steps: usize) -> Vec<Vec<f64>> {
    let lengths: Vec<f64> = points
        .windows(2)
        .map(|s| (s[1][0] - s[0][0]).hypot(s[1][1] - s[0][1]))
        .collect();
    let total: f64 = lengths.iter().sum();
    let mut s: Vec<Vec<f64>> = (0..=depth).map(|k| vec![0.0; 1 << k]).collect();
    s[0][0] = 1.0;
    for (seg, len) in points.windows(2).zip(&lengths) {
        if *len == 0.0 {
            continue;
        }
        let n = ((steps as f64 * len / total).round() as usize).max(1);
        let dx = [(seg[1][0] - seg[0][0]) / n as f64, (seg[1][1] - seg[0][1]) / n as f64];
        for _ in 0..n {
            let mut prev_old = s[0].clone();
            for k in 1..=depth {
                let old = s[k].clone();
                for w in 0..prev_old.len() {
                    let avg = 0.5 * (prev_old[w] + s[k - 1][w]);
                    for (i, d) in dx.iter().enumerate() {
                        s[k][2 * w + i] += avg * d;
                    }
                }
                prev_old = old;
            }
        }
    }
    s
}

/// All interleavings of `u` and `v`, with multiplicity.
pub fn shuffles(u: &[u8], v: &[u8]) -> Vec<Vec<u8>> {
    if u.is_empty() {
        return vec![v.to_vec()];
    }
    if v.is_empty() {
        return vec![u.to_vec()];
    }
    let mut out = Vec::new();
    for mut w in shuffles(&u[..u.len() - 1], v) {
        w.push(u[u.len() - 1]);
        out.push(w);
    }
    for mut w in shuffles(u, &v[..v.len() - 1]) {
        w.push(v[v.len() - 1]);
        out.push(w);
    }
    out
}

/// Every word of length `k` over `{0, 1}`.
pub fn words(k: usize) -> Vec<Vec<u8>> {
    (0..1usize << k)
        .map(|n| (0..k).map(|j| ((n >> (k - 1 - j)) & 1) as u8).collect())
        .collect()
}

fn seg_dist(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (vx, vy) = (b[0] - a[0], b[1] - a[1]);
    let (wx, wy) = (p[0] - a[0], p[1] - a[1]);
    let len2 = vx * vx + vy * vy;
    let t = if len2 == 0.0 { 0.0 } else { ((wx * vx + wy * vy) / len2).clamp(0.0, 1.0) };
    (wx - t * vx).hypot(wy - t * vy)
}

/// Largest distance from a ring point to the simplified edge that spans it.
pub fn ring_deviation(points: &[[f64; 2]], kept: &[usize]) -> f64 {
    let n = points.len();
    let mut worst: f64 = 0.0;
    for (j, &a) in kept.iter().enumerate() {
        let b = kept[(j + 1) % kept.len()];
        let span = if b > a { b - a } else { b + n - a };
        for off in 1..span {
            let i = (a + off) % n;
            worst = worst.max(seg_dist(points[i], points[a], points[b]));
        }
    }
    worst
}

/// A binary image of 1–4 random filled ellipses, some with holes.
pub fn random_blob_image<R: Rng>(rng: &mut R, size: usize) -> BinaryImage {
    let mut img = BinaryImage::blank(size, size);
    let s = size as f64;
    for _ in 0..rng.random_range(1..=4) {
        let (cx, cy) = (rng.random_range(0.2 * s..0.8 * s), rng.random_range(0.2 * s..0.8 * s));
        let (rx, ry) = (rng.random_range(2.0..0.3 * s), rng.random_range(2.0..0.3 * s));
        let inner = if rng.random_bool(0.3) { rng.random_range(0.3..0.7) } else { 0.0 };
        let rot: f64 = rng.random_range(0.0..std::f64::consts::PI);
        let (c, sn) = (rot.cos(), rot.sin());
        for y in 0..size {
            for x in 0..size {
                let (dx, dy) = (x as f64 - cx, y as f64 - cy);
                let (u, v) = (c * dx + sn * dy, -sn * dx + c * dy);
                let r = ((u / rx).powi(2) + (v / ry).powi(2)).sqrt();
                if r <= 1.0 && r >= inner {
                    img.set(x, y, true);
                }
            }
        }
    }
    img
}

pub fn naive_distance(metric: Metric, u: &FeatureMatrix, v: &FeatureMatrix) -> f64 {
    let mut d = 0.0;
    for (a, b) in u.as_slice().iter().zip(v.as_slice()) {
        d += match metric {
            Metric::Manhattan => (a - b).abs(),
            Metric::Chi2 if a + b == 0.0 => 0.0,
            Metric::Chi2 => (a - b) * (a - b) / (a + b),
        };
    }
    d
}

pub struct NaiveDoc<'a> {
    pub id: &'a str,
    pub writer: &'a str,
    pub matrix: &'a FeatureMatrix,
}

/// `(id, writer, distance)` of every other document, nearest first, ties by id.
pub fn naive_rank<'a>(query: &NaiveDoc<'a>, gallery: &[NaiveDoc<'a>], metric: Metric) -> Vec<(&'a str, &'a str, f64)> {
    let mut out: Vec<(&str, &str, f64)> = gallery
        .iter()
        .filter(|g| g.id != query.id)
        .map(|g| (g.id, g.writer, naive_distance(metric, query.matrix, g.matrix)))
        .collect();
    // insertion sort keeps this independent of the library's sorting
    for i in 1..out.len() {
        let mut j = i;
        while j > 0 {
            let (a, b) = (&out[j - 1], &out[j]);
            let swap = match a.2.partial_cmp(&b.2).unwrap() {
                Ordering::Greater => true,
                Ordering::Equal => a.0 > b.0,
                Ordering::Less => false,
            };
            if !swap {
                break;
            }
            out.swap(j - 1, j);
            j -= 1;
        }
    }
    out
}

/// Leave-one-out hit counts for each cut-off in `tops`.
pub fn naive_loo_hits(gallery: &[NaiveDoc<'_>], metric: Metric, tops: &[usize]) -> Vec<usize> {
    tops.iter()
        .map(|&n| {
            gallery
                .iter()
                .filter(|q| naive_rank(q, gallery, metric).iter().take(n).any(|c| c.1 == q.writer))
                .count()
        })
        .collect()
}

/// A random sum-1 matrix with some empty cells.
pub fn random_fm<R: Rng>(rng: &mut R, size: usize) -> FeatureMatrix {
    let codes: Vec<(usize, usize)> = (0..rng.random_range(1..40))
        .map(|_| (rng.random_range(0..size), rng.random_range(0..size)))
        .collect();
    FeatureMatrix::from_codes(size, &codes).unwrap()
}
