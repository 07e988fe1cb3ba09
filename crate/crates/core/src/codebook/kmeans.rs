//! Lloyd's k-means with k-means++ seeding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iter: usize,
    /// Stop once no centroid moves farther than this.
    pub tol: f64,
    pub seed: u64,
    /// Independent runs; the one with the lowest inertia is kept.
    pub restarts: usize,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            max_iter: 300,
            tol: 1e-6,
            seed,
            restarts: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    pub iterations: usize,
    /// Inertia after every assignment step of the retained run.
    pub inertia_history: Vec<f64>,
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Index of the closest centroid; ties go to the lowest index.
pub fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, c) in centroids.iter().enumerate() {
        let d = squared_distance(point, c);
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    (best, best_d)
}

pub fn kmeans<T: AsRef<[f64]> + Sync>(data: &[T], cfg: &KMeansConfig) -> Result<KMeansResult> {
    if cfg.k == 0 {
        return Err(Error::Config("k-means needs k >= 1".into()));
    }
    if data.len() < cfg.k {
        return Err(Error::InsufficientData(format!(
            "k-means needs at least {} points, got {}",
            cfg.k,
            data.len()
        )));
    }
    let dim = data[0].as_ref().len();
    for p in data {
        let p = p.as_ref();
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("k-means input"));
        }
    }

    let mut best: Option<KMeansResult> = None;
    for r in 0..cfg.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(r as u64);
        let run = lloyd(data, dim, cfg, &mut rng);
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one run"))
}

fn plus_plus_init<T: AsRef<[f64]> + Sync>(data: &[T], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = data.len();
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    let mut centroids = vec![data[first].as_ref().to_vec()];
    let mut d2: Vec<f64> = data
        .par_iter()
        .map(|p| squared_distance(p.as_ref(), &centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut idx = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if acc > target && w > 0.0 {
                    idx = i;
                    break;
                }
            }
            // rounding can land on an exhausted tail; fall back to the last positive weight
            if d2[idx] == 0.0 {
                idx = d2.iter().rposition(|&w| w > 0.0).expect("total > 0");
            }
            idx
        } else {
            // remaining points coincide with existing centres
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen[pick] = true;
        let c = data[pick].as_ref().to_vec();
        d2.par_iter_mut().zip(data.par_iter()).for_each(|(d, p)| {
            *d = d.min(squared_distance(p.as_ref(), &c));
        });
        centroids.push(c);
    }
    centroids
}

fn lloyd<T: AsRef<[f64]> + Sync>(data: &[T], dim: usize, cfg: &KMeansConfig, rng: &mut ChaCha8Rng) -> KMeansResult {
    let k = cfg.k;
    let mut centroids = plus_plus_init(data, k, rng);
    let mut history = Vec::new();
    let mut iterations = 0;
    loop {
        let assign: Vec<(usize, f64)> = data.par_iter().map(|p| nearest(p.as_ref(), &centroids)).collect();
        let inertia: f64 = assign.iter().map(|a| a.1).sum();
        history.push(inertia);
        if iterations == cfg.max_iter {
            return KMeansResult {
                centroids,
                inertia,
                iterations,
                inertia_history: history,
            };
        }
        iterations += 1;

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &(j, _)) in data.iter().zip(&assign) {
            counts[j] += 1;
            for (s, v) in sums[j].iter_mut().zip(p.as_ref()) {
                *s += v;
            }
        }
        // Empty clusters take over the worst-fitting points.
        let empty: Vec<usize> = (0..k).filter(|&j| counts[j] == 0).collect();
        let mut new_centroids: Vec<Vec<f64>> = sums
            .into_iter()
            .zip(&counts)
            .map(|(s, &c)| s.into_iter().map(|v| v / c.max(1) as f64).collect())
            .collect();
        if !empty.is_empty() {
            let mut order: Vec<usize> = (0..data.len()).collect();
            order.sort_by(|&a, &b| assign[b].1.total_cmp(&assign[a].1).then(a.cmp(&b)));
            for (&j, &i) in empty.iter().zip(&order) {
                new_centroids[j] = data[i].as_ref().to_vec();
            }
        }
        let shift = centroids
            .iter()
            .zip(&new_centroids)
            .map(|(a, b)| squared_distance(a, b).sqrt())
            .fold(0.0, f64::max);
        centroids = new_centroids;
        if shift < cfg.tol && empty.is_empty() {
            let inertia = data.par_iter().map(|p| nearest(p.as_ref(), &centroids).1).sum();
            history.push(inertia);
            return KMeansResult {
                centroids,
                inertia,
                iterations,
                inertia_history: history,
            };
        }
    }
}
