//! Binary persistence for codebooks and feature matrices.
//!
//! Codebook layout, all integers and floats little-endian:
//!
//! ```text
//! magic           8 bytes  "LPSCODEB"
//! version         u32
//! M, D, m, w      u32 ×4   codes, feature dim, truncation level, pathlet size
//! epsilon         f64
//! orientation     u8       0 = traversal, 1 = outward
//! include_holes   u8
//! invert          u8
//! min_perimeter   u32
//! seed            u64
//! basis tag       u32 length + UTF-8
//! bounds          D × (min f64, max f64)
//! centroids       M × D f64
//! ```
//!
//! Matrix layout:
//!
//! ```text
//! magic           8 bytes  "LPSFMATX"
//! version         u32
//! fingerprint     32 bytes SHA-256 of the codebook file
//! M               u32
//! pair_count      u64
//! document id     u32 length + UTF-8
//! writer id       u32 length + UTF-8
//! entries         M × M f64, row-major
//! ```

use std::fs;
use std::path::Path;

use super::{Codebook, FeatureMatrix, FeatureParams, Fingerprint};
use crate::error::{Error, Result};
use crate::pathlets::{PairOrientation, RescaleBounds};

const CODEBOOK_MAGIC: &[u8; 8] = b"LPSCODEB";
const MATRIX_MAGIC: &[u8; 8] = b"LPSFMATX";
pub const CODEBOOK_FORMAT_VERSION: u32 = 1;
pub const MATRIX_FORMAT_VERSION: u32 = 1;

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn str(&mut self, s: &str) {
        self.u32(s.len() as u32);
        self.0.extend_from_slice(s.as_bytes());
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    kind: &'static str,
}

impl<'a> Reader<'a> {
    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Format {
            kind: self.kind,
            reason: reason.into(),
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() < n {
            return Err(self.err("unexpected end of file"));
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn str(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        let bytes = self.take(n)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| self.err("string is not UTF-8"))
    }
    fn bool(&mut self) -> Result<bool> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            v => Err(self.err(format!("invalid flag byte {v}"))),
        }
    }
    fn finish(&self) -> Result<()> {
        if self.buf.is_empty() {
            Ok(())
        } else {
            Err(self.err(format!("{} trailing bytes", self.buf.len())))
        }
    }
}

impl Codebook {
    pub fn to_bytes(&self) -> Vec<u8> {
        let p = &self.params;
        let mut w = Writer(Vec::new());
        w.0.extend_from_slice(CODEBOOK_MAGIC);
        w.u32(CODEBOOK_FORMAT_VERSION);
        w.u32(self.size() as u32);
        w.u32(self.dim() as u32);
        w.u32(p.level as u32);
        w.u32(p.pathlet_size as u32);
        w.f64(p.epsilon);
        w.u8(p.orientation.code());
        w.u8(p.include_holes as u8);
        w.u8(p.invert as u8);
        w.u32(p.min_perimeter as u32);
        w.u64(p.seed);
        w.str(&self.basis_convention);
        for (lo, hi) in self.bounds.min.iter().zip(&self.bounds.max) {
            w.f64(*lo);
            w.f64(*hi);
        }
        for c in &self.centroids {
            for &v in c {
                w.f64(v);
            }
        }
        w.0
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader {
            buf: bytes,
            kind: "codebook",
        };
        if r.take(8)? != CODEBOOK_MAGIC {
            return Err(r.err("bad magic"));
        }
        let version = r.u32()?;
        if version != CODEBOOK_FORMAT_VERSION {
            return Err(r.err(format!("unsupported version {version}")));
        }
        let size = r.u32()? as usize;
        let dim = r.u32()? as usize;
        let level = r.u32()? as usize;
        let pathlet_size = r.u32()? as usize;
        let epsilon = r.f64()?;
        let orientation_code = r.u8()?;
        let orientation =
            PairOrientation::from_code(orientation_code).ok_or_else(|| r.err("unknown pair orientation"))?;
        let include_holes = r.bool()?;
        let invert = r.bool()?;
        let min_perimeter = r.u32()? as usize;
        let seed = r.u64()?;
        let basis_convention = r.str()?;
        if basis_convention != crate::signature::BASIS_CONVENTION {
            return Err(r.err(format!("unsupported basis convention '{basis_convention}'")));
        }
        let mut bounds = RescaleBounds {
            min: Vec::with_capacity(dim),
            max: Vec::with_capacity(dim),
        };
        for _ in 0..dim {
            bounds.min.push(r.f64()?);
            bounds.max.push(r.f64()?);
        }
        let mut centroids = Vec::with_capacity(size);
        for _ in 0..size {
            centroids.push((0..dim).map(|_| r.f64()).collect::<Result<Vec<_>>>()?);
        }
        r.finish()?;
        let params = FeatureParams {
            epsilon,
            pathlet_size,
            level,
            orientation,
            min_perimeter,
            include_holes,
            invert,
            seed,
        };
        let expected_dim: usize = crate::signature::witt_dims(level).iter().sum();
        if expected_dim != dim {
            return Err(Error::DimensionMismatch {
                expected: expected_dim,
                found: dim,
            });
        }
        let mut cb = Codebook::new(params, bounds, centroids)?;
        cb.basis_convention = basis_convention;
        Ok(cb)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

/// A persisted per-document feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRecord {
    pub doc_id: String,
    pub writer_id: String,
    pub fingerprint: Fingerprint,
    pub matrix: FeatureMatrix,
}

impl MatrixRecord {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer(Vec::new());
        w.0.extend_from_slice(MATRIX_MAGIC);
        w.u32(MATRIX_FORMAT_VERSION);
        w.0.extend_from_slice(&self.fingerprint.0);
        w.u32(self.matrix.size() as u32);
        w.u64(self.matrix.pair_count());
        w.str(&self.doc_id);
        w.str(&self.writer_id);
        for &v in self.matrix.as_slice() {
            w.f64(v);
        }
        w.0
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader {
            buf: bytes,
            kind: "feature matrix",
        };
        if r.take(8)? != MATRIX_MAGIC {
            return Err(r.err("bad magic"));
        }
        let version = r.u32()?;
        if version != MATRIX_FORMAT_VERSION {
            return Err(r.err(format!("unsupported version {version}")));
        }
        let fingerprint = Fingerprint(r.take(32)?.try_into().unwrap());
        let size = r.u32()? as usize;
        let pair_count = r.u64()?;
        let doc_id = r.str()?;
        let writer_id = r.str()?;
        let data = (0..size * size).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
        r.finish()?;
        Ok(Self {
            doc_id,
            writer_id,
            fingerprint,
            matrix: FeatureMatrix::from_raw(size, data, pair_count)?,
        })
    }
}

pub fn write_matrix(path: impl AsRef<Path>, record: &MatrixRecord) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, record.to_bytes()).map_err(|e| Error::io(path, e))
}

/// Reads a matrix file and checks it was produced with `codebook`.
pub fn read_matrix(path: impl AsRef<Path>, codebook: &Codebook) -> Result<MatrixRecord> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let record = MatrixRecord::from_bytes(&bytes)?;
    let expected = codebook.fingerprint();
    if record.fingerprint != expected {
        return Err(Error::FingerprintMismatch(format!(
            "{} was built with codebook {}, active codebook is {}",
            path.display(),
            record.fingerprint,
            expected
        )));
    }
    if record.matrix.size() != codebook.size() {
        return Err(Error::DimensionMismatch {
            expected: codebook.size(),
            found: record.matrix.size(),
        });
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::test_params;

    fn sample() -> Codebook {
        let bounds = RescaleBounds {
            min: vec![-1.0, -2.0, -3.0, -4.0, -5.0],
            max: vec![1.0, 2.0, 3.0, 4.0, 5.0],
        };
        let centroids = (0..3).map(|i| (0..5).map(|j| (i * 5 + j) as f64 / 10.0).collect()).collect();
        Codebook::new(test_params(), bounds, centroids).unwrap()
    }

    #[test]
    fn codebook_round_trip() {
        let cb = sample();
        let back = Codebook::from_bytes(&cb.to_bytes()).unwrap();
        assert_eq!(back, cb);
        assert_eq!(&cb.to_bytes()[..8], b"LPSCODEB");
    }

    #[test]
    fn rejects_corrupt_codebook() {
        let mut bytes = sample().to_bytes();
        assert!(Codebook::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        bytes[0] = b'X';
        assert!(Codebook::from_bytes(&bytes).is_err());
        let mut extra = sample().to_bytes();
        extra.push(0);
        assert!(Codebook::from_bytes(&extra).is_err());
    }

    #[test]
    fn matrix_round_trip_and_fingerprint_check() {
        let dir = tempfile::tempdir().unwrap();
        let cb = sample();
        let rec = MatrixRecord {
            doc_id: "d1".into(),
            writer_id: "w1".into(),
            fingerprint: cb.fingerprint(),
            matrix: FeatureMatrix::from_codes(3, &[(0, 1), (2, 2)]).unwrap(),
        };
        let path = dir.path().join("d1.lpsfm");
        write_matrix(&path, &rec).unwrap();
        assert_eq!(read_matrix(&path, &cb).unwrap(), rec);

        let mut other = cb.clone();
        other.params.epsilon = 2.0;
        assert!(matches!(read_matrix(&path, &other), Err(Error::FingerprintMismatch(_))));
    }
}
