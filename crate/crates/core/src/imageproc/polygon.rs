//! Closed-curve Douglas–Peucker simplification.

use super::contour::Contour;
use crate::error::{Error, Result};
use crate::polyline::{dist, point_segment_distance, Polyline};

/// Indices of the ring vertices retained at tolerance `epsilon`, ascending.
///
/// The ring is split at two far-apart anchors (the point farthest from the
/// first vertex, then the point farthest from that one); each half is
/// simplified independently. Every dropped point lies within `epsilon` of the
/// segment joining its retained neighbours.
pub fn simplify_ring(points: &[[f64; 2]], epsilon: f64) -> Result<Vec<usize>> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::Config(format!("polygonization tolerance must be >= 0, got {epsilon}")));
    }
    let n = points.len();
    if n < 3 {
        return Ok((0..n).collect());
    }
    let farthest_from = |origin: usize| -> usize {
        let mut best = origin;
        let mut best_d = 0.0;
        for (i, &p) in points.iter().enumerate() {
            let d = dist(points[origin], p);
            if d > best_d {
                best_d = d;
                best = i;
            }
        }
        best
    };
    let a = farthest_from(0);
    let b = farthest_from(a);
    if a == b {
        return Ok(vec![a]);
    }

    let mut keep = vec![false; n];
    keep[a] = true;
    keep[b] = true;
    let chain = |from: usize, to: usize| -> Vec<usize> {
        let len = (to + n - from) % n + 1;
        (0..len).map(|k| (from + k) % n).collect()
    };
    for half in [chain(a, b), chain(b, a)] {
        simplify_chain(points, &half, epsilon, &mut keep);
    }
    Ok((0..n).filter(|&i| keep[i]).collect())
}

fn simplify_chain(points: &[[f64; 2]], chain: &[usize], epsilon: f64, keep: &mut [bool]) {
    let mut stack = vec![(0usize, chain.len() - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if hi <= lo + 1 {
            continue;
        }
        let (pa, pb) = (points[chain[lo]], points[chain[hi]]);
        let mut best = lo;
        let mut best_d = -1.0;
        for i in lo + 1..hi {
            let d = point_segment_distance(points[chain[i]], pa, pb);
            if d > best_d {
                best_d = d;
                best = i;
            }
        }
        if best_d > epsilon {
            keep[chain[best]] = true;
            stack.push((best, hi));
            stack.push((lo, best));
        }
    }
}

/// Polygonizes a raster contour with tolerance `epsilon` (pixels).
///
/// The result is a closed polyline whose vertices are a subsequence of the
/// contour points. Callers discard results with fewer than 3 vertices.
pub fn polygonize(contour: &Contour, epsilon: f64) -> Result<Polyline> {
    let pts: Vec<[f64; 2]> = contour.points.iter().map(|p| [p[0] as f64, p[1] as f64]).collect();
    let kept = simplify_ring(&pts, epsilon)?;
    Ok(Polyline::new(kept.into_iter().map(|i| pts[i]).collect(), true))
}

/// Largest distance from any ring point to the simplified ring given by `kept`.
pub fn max_deviation(points: &[[f64; 2]], kept: &[usize]) -> f64 {
    let n = points.len();
    if kept.len() < 2 {
        return kept
            .first()
            .map(|&k| points.iter().map(|&p| dist(p, points[k])).fold(0.0, f64::max))
            .unwrap_or(0.0);
    }
    let mut worst: f64 = 0.0;
    for (j, &from) in kept.iter().enumerate() {
        let to = kept[(j + 1) % kept.len()];
        let span = (to + n - from) % n;
        for k in 1..span {
            let p = points[(from + k) % n];
            worst = worst.max(point_segment_distance(p, points[from], points[to]));
        }
    }
    worst
}
