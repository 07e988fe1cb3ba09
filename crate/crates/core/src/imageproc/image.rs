use std::path::Path;

use crate::error::{Error, Result};

/// 8-bit grayscale raster, row-major, `y` growing downward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InsufficientData(format!("empty image {width}x{height}")));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                found: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Loads PNG or PGM; color images are reduced to luminance.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let img = image::ImageReader::open(path)
            .map_err(|e| Error::io(path, e))?
            .with_guessed_format()
            .map_err(|e| Error::io(path, e))?
            .decode()
            .map_err(|source| Error::Image {
                path: path.to_path_buf(),
                source,
            })?;
        let luma = img.to_luma8();
        let (w, h) = luma.dimensions();
        Self::new(w as usize, h as usize, luma.into_raw())
    }

    /// Writes the image as PNG, or binary PGM when the extension is `pgm`.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let buf = image::GrayImage::from_raw(self.width as u32, self.height as u32, self.pixels.clone())
            .expect("buffer size checked at construction");
        let format = match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("pgm") => image::ImageFormat::Pnm,
            _ => image::ImageFormat::Png,
        };
        buf.save_with_format(path, format).map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Photometric inverse, for light ink on a dark background.
    pub fn inverted(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|p| 255 - p).collect(),
        }
    }
}

/// Ink mask with the same geometry as its source image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    ink: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, ink: Vec<bool>) -> Result<Self> {
        if ink.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                found: ink.len(),
            });
        }
        Ok(Self { width, height, ink })
    }

    pub fn blank(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            ink: vec![false; width * height],
        }
    }

    /// Builds a mask from an ASCII picture, `#` for ink; rows separated by newlines.
    pub fn from_ascii(art: &str) -> Self {
        let rows: Vec<&str> = art.lines().map(str::trim_end).filter(|r| !r.is_empty()).collect();
        let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut img = Self::blank(width, rows.len());
        for (y, row) in rows.iter().enumerate() {
            for (x, c) in row.chars().enumerate() {
                img.set(x, y, c == '#');
            }
        }
        img
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.ink[y * self.width + x]
    }

    /// Ink lookup that treats everything outside the raster as background.
    pub fn get_signed(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.get(x as usize, y as usize)
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.ink[y * self.width + x] = value;
    }

    pub fn ink_count(&self) -> usize {
        self.ink.iter().filter(|&&b| b).count()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.ink
    }
}
