use super::image::{BinaryImage, GrayImage};

/// 256-bin intensity histogram.
pub fn histogram(img: &GrayImage) -> [u64; 256] {
    let mut hist = [0u64; 256];
    for &p in img.pixels() {
        hist[p as usize] += 1;
    }
    hist
}

/// Otsu threshold: ink is every pixel strictly darker than the returned value.
///
/// The threshold maximizes between-class variance; among ties the lowest
/// value wins. A constant image yields threshold 0 and an empty ink mask.
pub fn otsu_threshold(img: &GrayImage) -> u8 {
    let hist = histogram(img);
    let total = img.pixels().len() as f64;
    let sum_all: f64 = hist.iter().enumerate().map(|(v, &c)| v as f64 * c as f64).sum();

    let mut best_t = 0usize;
    let mut best_var = f64::NEG_INFINITY;
    let (mut count_dark, mut sum_dark) = (0.0, 0.0);
    // Class "dark" holds intensities < t.
    for t in 0..=255usize {
        if t > 0 {
            count_dark += hist[t - 1] as f64;
            sum_dark += (t - 1) as f64 * hist[t - 1] as f64;
        }
        let count_light = total - count_dark;
        let var = if count_dark == 0.0 || count_light == 0.0 {
            0.0
        } else {
            let mean_dark = sum_dark / count_dark;
            let mean_light = (sum_all - sum_dark) / count_light;
            let diff = mean_dark - mean_light;
            count_dark * count_light * diff * diff
        };
        if var > best_var {
            best_var = var;
            best_t = t;
        }
    }
    best_t as u8
}

/// Otsu binarization with dark ink on a light background.
pub fn otsu_binarize(img: &GrayImage) -> (BinaryImage, u8) {
    let t = otsu_threshold(img);
    let ink: Vec<bool> = img.pixels().iter().map(|&p| p < t).collect();
    let bin = BinaryImage::new(img.width(), img.height(), ink).expect("same geometry");
    if bin.ink_count() == 0 || bin.ink_count() == img.pixels().len() {
        log::warn!("otsu: one class is empty (threshold {t}); image is effectively constant");
    }
    (bin, t)
}
