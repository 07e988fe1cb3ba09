//! End-to-end composition: page image → contours → pathlets → features.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codebook::{Codebook, FeatureMatrix, FeatureParams};
use crate::config::PipelineConfig;
use crate::error::Result;
use crate::imageproc::{otsu_binarize, polygonize, trace_contours, GrayImage};
use crate::pathlets::{extract_pairs, LpsExtractor, LpsFeature, PairOrientation};
use crate::polyline::Polyline;

/// Polygonized contours of one page.
#[derive(Debug, Clone)]
pub struct PageGeometry {
    pub polygons: Vec<Polyline>,
    /// Raster border points of the contours that were polygonized.
    pub raw_points: usize,
    pub threshold: u8,
}

impl PageGeometry {
    pub fn vertex_count(&self) -> usize {
        self.polygons.iter().map(Polyline::len).sum()
    }

    /// Fraction of raster contour points removed by polygonization.
    pub fn reduction(&self) -> f64 {
        if self.raw_points == 0 {
            return 0.0;
        }
        1.0 - self.vertex_count() as f64 / self.raw_points as f64
    }
}

pub fn page_geometry(img: &GrayImage, params: &FeatureParams) -> Result<PageGeometry> {
    let (bin, threshold) = if params.invert {
        otsu_binarize(&img.inverted())
    } else {
        otsu_binarize(img)
    };
    let contours = trace_contours(&bin, params.min_perimeter);
    let mut polygons = Vec::with_capacity(contours.len());
    let mut raw_points = 0;
    for c in contours.iter().filter(|c| params.include_holes || !c.is_hole) {
        raw_points += c.len();
        let poly = polygonize(c, params.epsilon)?;
        if poly.len() >= 3 {
            polygons.push(poly);
        }
    }
    Ok(PageGeometry {
        polygons,
        raw_points,
        threshold,
    })
}

/// Raw feature of every pathlet anchored on a ring, indexed by anchor.
fn ring_features(poly: &Polyline, ex: &LpsExtractor, reversed: bool) -> Result<Vec<LpsFeature>> {
    let n = poly.len();
    let w = ex.pathlet_size();
    (0..n)
        .map(|i| {
            let mut pts: Vec<[f64; 2]> = (0..w).map(|k| poly.points[(i + k) % n]).collect();
            if reversed {
                pts.reverse();
            }
            ex.feature(&pts)
        })
        .collect()
}

/// Raw features of all pathlets on the page (the codebook training unit).
pub fn pathlet_features(geom: &PageGeometry, ex: &LpsExtractor) -> Result<Vec<LpsFeature>> {
    let mut out = Vec::new();
    for poly in geom.polygons.iter().filter(|p| p.len() >= ex.pathlet_size()) {
        out.extend(ring_features(poly, ex, false)?);
    }
    Ok(out)
}

/// Raw `(backward, forward)` features of every hinged pair on the page.
pub fn pair_features(
    geom: &PageGeometry,
    ex: &LpsExtractor,
    orientation: PairOrientation,
) -> Result<Vec<(LpsFeature, LpsFeature)>> {
    let w = ex.pathlet_size();
    let mut out = Vec::new();
    for (id, poly) in geom.polygons.iter().enumerate() {
        let n = poly.len();
        if n < 2 * w - 1 {
            continue;
        }
        if !poly.closed {
            for pair in extract_pairs(poly, id, w, orientation)? {
                out.push((ex.feature(&pair.backward.points)?, ex.feature(&pair.forward.points)?));
            }
            continue;
        }
        let forward = ring_features(poly, ex, false)?;
        let backward = match orientation {
            PairOrientation::Traversal => None,
            PairOrientation::Outward => Some(ring_features(poly, ex, true)?),
        };
        for hinge in 0..n {
            let back_anchor = (hinge + n - (w - 1)) % n;
            let back = backward.as_ref().unwrap_or(&forward)[back_anchor].clone();
            out.push((back, forward[hinge].clone()));
        }
    }
    Ok(out)
}

/// Feature matrix of a page under a trained codebook.
pub fn document_matrix(img: &GrayImage, codebook: &Codebook) -> Result<FeatureMatrix> {
    let params = &codebook.params;
    let ex = LpsExtractor::new(params.pathlet_size, params.level)?;
    let geom = page_geometry(img, params)?;
    let pairs = pair_features(&geom, &ex, params.orientation)?;
    let codes = pairs
        .iter()
        .map(|(b, f)| Ok((codebook.quantize_raw(b)?, codebook.quantize_raw(f)?)))
        .collect::<Result<Vec<_>>>()?;
    FeatureMatrix::from_codes(codebook.size(), &codes)
}

/// Raw pathlet features of one page, for pooling into a training set.
pub fn page_pathlet_features(img: &GrayImage, params: &FeatureParams) -> Result<Vec<LpsFeature>> {
    let ex = LpsExtractor::new(params.pathlet_size, params.level)?;
    pathlet_features(&page_geometry(img, params)?, &ex)
}

/// Subsamples a pooled training set to the configured cap and learns a codebook.
pub fn train_codebook_from_pool(mut pool: Vec<LpsFeature>, config: &PipelineConfig) -> Result<Codebook> {
    config.validate()?;
    if pool.len() > config.subsample_cap {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut keep = sample(&mut rng, pool.len(), config.subsample_cap).into_vec();
        keep.sort_unstable();
        pool = keep.into_iter().map(|i| pool[i].clone()).collect();
        log::info!("subsampled training pool to {}", pool.len());
    }
    Codebook::train(config.feature_params(), &pool, config.codebook_size, config.restarts)
}

/// Pools pathlet features from training pages and learns a codebook.
pub fn train_codebook(pages: &[GrayImage], config: &PipelineConfig) -> Result<Codebook> {
    config.validate()?;
    let params = config.feature_params();
    let per_page = pages
        .par_iter()
        .map(|img| page_pathlet_features(img, &params))
        .collect::<Result<Vec<_>>>()?;
    let pool: Vec<LpsFeature> = per_page.into_iter().flatten().collect();
    log::info!("training pool: {} pathlet features from {} pages", pool.len(), pages.len());
    train_codebook_from_pool(pool, config)
}
