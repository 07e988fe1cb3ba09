//! Offline writer identification from log path signatures of handwriting
//! contour fragments.
//!
//! A page is binarized, its ink contours traced and polygonized; short
//! windows of polygon vertices ("pathlets") are described by the truncated
//! log-signature of the path they trace. Pathlet features are quantized
//! against a k-means codebook, and each document becomes the normalized
//! co-occurrence matrix of codes over pairs of pathlets meeting at a vertex.
//! Writers are identified by nearest-neighbour search over these matrices.

pub mod codebook;
pub mod config;
pub mod error;
pub mod identify;
pub mod imageproc;
pub mod manifest;
pub mod pathlets;
pub mod pipeline;
pub mod polyline;
pub mod signature;
pub mod synth;

pub use codebook::{Codebook, FeatureMatrix, FeatureParams, Fingerprint, MatrixRecord};
pub use config::{MetricChoice, PipelineConfig};
pub use error::{Error, Result};
pub use identify::{AccuracyTable, DocumentDescriptor, Metric, RankingResult};
pub use imageproc::{BinaryImage, Contour, GrayImage};
pub use manifest::{CorpusManifest, ManifestEntry, Role};
pub use pathlets::{LpsExtractor, LpsFeature, PairOrientation, Pathlet, PathletPair, RescaleBounds};
pub use polyline::Polyline;
pub use signature::{HallBasis, LogSigVector, TensorSeries};
