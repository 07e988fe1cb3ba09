//! Parametric pseudo-handwriting pages for desk-scale experiments.
//!
//! All writers share one alphabet of glyph skeletons. A writer is a fixed
//! style (slant, size, aspect, stroke width, curvature, spacing and a private
//! deformation of every glyph); each document re-draws that style with small
//! per-page and per-glyph noise. Words are rendered as single cursive strokes
//! through cardinal splines, anti-aliased, on a noisy light background.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::imageproc::{BinaryImage, GrayImage};
use crate::manifest::{CorpusManifest, ManifestEntry, Role};

const ALPHABET_SEED: u64 = 0x5eed_a1fa_be70_0001;
const ALPHABET_SIZE: usize = 26;
pub const PAPER_LEVEL: f64 = 220.0;
pub const INK_LEVEL: f64 = 30.0;
pub const NOISE_SIGMA: f64 = 5.0;

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn rng_for(parts: &[u64]) -> ChaCha8Rng {
    let seed = parts.iter().fold(0u64, |acc, &p| mix(acc ^ mix(p)));
    ChaCha8Rng::seed_from_u64(seed)
}

/// Glyph skeleton in em units: x to the right, y downward, baseline at 0 and
/// x-height at −1.
#[derive(Debug, Clone)]
struct Glyph {
    points: Vec<[f64; 2]>,
    advance: f64,
}

fn alphabet() -> Vec<Glyph> {
    let mut rng = ChaCha8Rng::seed_from_u64(ALPHABET_SEED);
    (0..ALPHABET_SIZE)
        .map(|g| {
            let advance = rng.random_range(0.55..1.0);
            let n = rng.random_range(4..=7);
            let mut points = Vec::with_capacity(n);
            points.push([0.0, rng.random_range(-0.35..-0.05)]);
            for i in 1..n - 1 {
                let t = i as f64 / (n - 1) as f64;
                // occasional backward step draws a loop
                let x = if rng.random_bool(0.3) {
                    advance * (t - rng.random_range(0.1..0.35))
                } else {
                    advance * (t + rng.random_range(-0.1..0.1))
                };
                let y = match (g % 7, i) {
                    (0, 1) | (3, 2) => rng.random_range(-1.9..-1.5),
                    (5, 2) => rng.random_range(0.4..0.8),
                    _ => rng.random_range(-1.05..0.0),
                };
                points.push([x, y]);
            }
            points.push([advance, rng.random_range(-0.35..-0.05)]);
            Glyph { points, advance }
        })
        .collect()
}

/// A writer's persistent style.
#[derive(Debug, Clone)]
pub struct WriterStyle {
    /// Shear angle in radians; positive leans right.
    pub slant: f64,
    /// Height of lowercase letters in pixels.
    pub x_height: f64,
    /// Horizontal stretch of glyphs.
    pub aspect: f64,
    pub stroke_width: f64,
    /// Scale of vertical glyph excursions.
    pub curvature: f64,
    /// Cardinal spline tension in `[0, 1)`; higher is more angular.
    pub tension: f64,
    /// Gap between glyphs within a word, em.
    pub letter_gap: f64,
    pub spacing_jitter: f64,
    glyph_warp: Vec<Vec<[f64; 2]>>,
}

impl WriterStyle {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let alphabet = alphabet();
        let warp = Normal::new(0.0, 0.12).unwrap();
        let glyph_warp = alphabet
            .iter()
            .map(|g| {
                g.points
                    .iter()
                    .map(|_| [warp.sample(rng), warp.sample(rng)])
                    .collect()
            })
            .collect();
        Self {
            slant: rng.random_range(-25f64..25.0).to_radians(),
            x_height: rng.random_range(24.0..34.0),
            aspect: rng.random_range(0.75..1.3),
            stroke_width: rng.random_range(2.5..4.5),
            curvature: rng.random_range(0.7..1.3),
            tension: rng.random_range(0.0..0.3),
            letter_gap: rng.random_range(0.05..0.35),
            spacing_jitter: rng.random_range(0.02..0.12),
            glyph_warp,
        }
    }

    /// Style of writer `index` in a corpus generated from `seed`.
    pub fn for_writer(seed: u64, index: usize) -> Self {
        Self::random(&mut rng_for(&[seed, 1, index as u64]))
    }
}

/// Page geometry and content volume.
#[derive(Debug, Clone)]
pub struct PageLayout {
    pub width: usize,
    pub height: usize,
    pub margin: f64,
    pub antialias: bool,
    pub noise_sigma: f64,
}

impl Default for PageLayout {
    fn default() -> Self {
        Self {
            width: 1400,
            height: 1000,
            margin: 50.0,
            antialias: true,
            noise_sigma: NOISE_SIGMA,
        }
    }
}

/// A rendered page plus its ground-truth ink mask (coverage ≥ ½).
#[derive(Debug, Clone)]
pub struct RenderedPage {
    pub image: GrayImage,
    pub truth: BinaryImage,
}

fn cardinal_spline(ctrl: &[[f64; 2]], tension: f64) -> Vec<[f64; 2]> {
    if ctrl.len() < 2 {
        return ctrl.to_vec();
    }
    let s = (1.0 - tension) / 2.0;
    let at = |i: isize| ctrl[i.clamp(0, ctrl.len() as isize - 1) as usize];
    let mut out = vec![ctrl[0]];
    for i in 0..ctrl.len() as isize - 1 {
        let (p0, p1, p2, p3) = (at(i - 1), at(i), at(i + 1), at(i + 2));
        let m1 = [s * (p2[0] - p0[0]), s * (p2[1] - p0[1])];
        let m2 = [s * (p3[0] - p1[0]), s * (p3[1] - p1[1])];
        let chord = (p2[0] - p1[0]).hypot(p2[1] - p1[1]);
        let steps = (chord / 0.75).ceil().max(2.0) as usize;
        for k in 1..=steps {
            let t = k as f64 / steps as f64;
            let (t2, t3) = (t * t, t * t * t);
            let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
            let h10 = t3 - 2.0 * t2 + t;
            let h01 = -2.0 * t3 + 3.0 * t2;
            let h11 = t3 - t2;
            out.push([
                h00 * p1[0] + h10 * m1[0] + h01 * p2[0] + h11 * m2[0],
                h00 * p1[1] + h10 * m1[1] + h01 * p2[1] + h11 * m2[1],
            ]);
        }
    }
    out
}

struct Canvas {
    width: usize,
    height: usize,
    coverage: Vec<f32>,
    antialias: bool,
}

impl Canvas {
    fn stroke(&mut self, path: &[[f64; 2]], radius: f64) {
        for seg in path.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let pad = radius + 1.0;
            let x0 = (a[0].min(b[0]) - pad).floor().max(0.0) as usize;
            let y0 = (a[1].min(b[1]) - pad).floor().max(0.0) as usize;
            let x1 = ((a[0].max(b[0]) + pad).ceil() as usize).min(self.width.saturating_sub(1));
            let y1 = ((a[1].max(b[1]) + pad).ceil() as usize).min(self.height.saturating_sub(1));
            if a[0].max(b[0]) + pad < 0.0 || a[1].max(b[1]) + pad < 0.0 {
                continue;
            }
            for y in y0..=y1 {
                for x in x0..=x1 {
                    let d = crate::polyline::point_segment_distance([x as f64, y as f64], a, b);
                    let c = if self.antialias {
                        (radius + 0.5 - d).clamp(0.0, 1.0)
                    } else if d <= radius {
                        1.0
                    } else {
                        0.0
                    } as f32;
                    let cell = &mut self.coverage[y * self.width + x];
                    if c > *cell {
                        *cell = c;
                    }
                }
            }
        }
    }
}

/// Renders one document by a writer; `doc_seed` drives text and per-page noise.
pub fn render_page(style: &WriterStyle, doc_seed: u64, layout: &PageLayout) -> RenderedPage {
    let alphabet = alphabet();
    let mut rng = rng_for(&[doc_seed, 2]);
    let unit = Normal::new(0.0, 1.0).unwrap();

    let slant = style.slant + 1.5f64.to_radians() * unit.sample(&mut rng);
    let xh = style.x_height * (1.0 + 0.03 * unit.sample(&mut rng));
    let width = (style.stroke_width + 0.15 * unit.sample(&mut rng)).max(1.2);
    let shear = slant.tan();
    let line_pitch = 3.0 * xh;

    let mut canvas = Canvas {
        width: layout.width,
        height: layout.height,
        coverage: vec![0.0; layout.width * layout.height],
        antialias: layout.antialias,
    };

    let right = layout.width as f64 - layout.margin;
    let mut baseline = layout.margin + 2.0 * xh;
    while baseline + 1.0 * xh < layout.height as f64 - layout.margin {
        let drift = 0.01 * unit.sample(&mut rng);
        let mut pen = layout.margin + xh * rng.random_range(0.0..1.0);
        loop {
            let letters = rng.random_range(2..=6);
            let glyphs: Vec<usize> = (0..letters).map(|_| rng.random_range(0..ALPHABET_SIZE)).collect();
            let word_width: f64 = glyphs
                .iter()
                .map(|&g| (alphabet[g].advance + style.letter_gap) * style.aspect * xh)
                .sum();
            if pen + word_width > right {
                break;
            }
            let mut ctrl = Vec::new();
            let mut x_em = 0.0;
            for &g in &glyphs {
                let glyph = &alphabet[g];
                for (p, warp) in glyph.points.iter().zip(&style.glyph_warp[g]) {
                    let jx = 0.04 * unit.sample(&mut rng);
                    let jy = 0.04 * unit.sample(&mut rng);
                    let gx = p[0] + warp[0] + jx;
                    let gy = -0.5 + (p[1] + warp[1] + jy + 0.5) * style.curvature;
                    let local_x = (x_em + gx) * style.aspect * xh;
                    let local_y = gy * xh;
                    let px = pen + local_x - local_y * shear;
                    let py = baseline + local_y + drift * local_x;
                    ctrl.push([px, py]);
                }
                x_em += glyph.advance + style.letter_gap + style.spacing_jitter * unit.sample(&mut rng);
            }
            let path = cardinal_spline(&ctrl, style.tension);
            canvas.stroke(&path, width / 2.0);
            pen += word_width + xh * (0.9 + 0.25 * rng.random_range(-1.0..1.0));
        }
        baseline += line_pitch * (1.0 + 0.03 * unit.sample(&mut rng));
    }

    let noise = Normal::new(0.0, layout.noise_sigma.max(0.0)).unwrap();
    let pixels: Vec<u8> = canvas
        .coverage
        .iter()
        .map(|&c| {
            let v = PAPER_LEVEL - c as f64 * (PAPER_LEVEL - INK_LEVEL) + noise.sample(&mut rng);
            v.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    let truth = canvas.coverage.iter().map(|&c| c >= 0.5).collect();
    RenderedPage {
        image: GrayImage::new(layout.width, layout.height, pixels).expect("canvas geometry"),
        truth: BinaryImage::new(layout.width, layout.height, truth).expect("canvas geometry"),
    }
}

/// Corpus size and page settings.
#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub writers: usize,
    pub docs_per_writer: usize,
    pub seed: u64,
    pub layout: PageLayout,
}

impl SynthConfig {
    pub fn new(writers: usize, docs_per_writer: usize, seed: u64) -> Self {
        Self {
            writers,
            docs_per_writer,
            seed,
            layout: PageLayout::default(),
        }
    }
}

pub fn writer_id(index: usize) -> String {
    format!("w{index:03}")
}

pub fn doc_id(writer: usize, doc: usize) -> String {
    format!("w{writer:03}_d{doc:02}")
}

/// Renders document `doc` of writer `writer` in a corpus.
pub fn render_corpus_page(cfg: &SynthConfig, writer: usize, doc: usize) -> RenderedPage {
    let style = WriterStyle::for_writer(cfg.seed, writer);
    let doc_seed = mix(cfg.seed ^ mix(writer as u64) ^ mix(mix(doc as u64 + 1)));
    render_page(&style, doc_seed, &cfg.layout)
}

/// Writes `images/<doc>.png` for every document and a `manifest.csv` in which
/// every document is both a training page and a gallery entry.
pub fn generate_corpus(cfg: &SynthConfig, out_dir: impl AsRef<Path>) -> Result<CorpusManifest> {
    if cfg.writers == 0 || cfg.docs_per_writer == 0 {
        return Err(Error::Config("writers and docs per writer must be >= 1".into()));
    }
    let out_dir = out_dir.as_ref();
    let images = out_dir.join("images");
    fs::create_dir_all(&images).map_err(|e| Error::io(&images, e))?;
    let jobs: Vec<(usize, usize)> = (0..cfg.writers)
        .flat_map(|w| (0..cfg.docs_per_writer).map(move |d| (w, d)))
        .collect();
    use rayon::prelude::*;
    let entries = jobs
        .par_iter()
        .map(|&(w, d)| {
            let page = render_corpus_page(cfg, w, d);
            let rel = Path::new("images").join(format!("{}.png", doc_id(w, d)));
            page.image.save(out_dir.join(&rel))?;
            Ok(ManifestEntry {
                doc_id: doc_id(w, d),
                writer_id: writer_id(w),
                path: rel,
                roles: vec![Role::Train, Role::Gallery],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = CorpusManifest::new(out_dir, entries)?;
    manifest.save(out_dir.join("manifest.csv"))?;
    Ok(manifest)
}
