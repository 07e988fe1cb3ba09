//! From a page image to polygonized ink contours.

mod contour;
mod image;
mod otsu;
mod polygon;

pub use self::image::{BinaryImage, GrayImage};
pub use contour::{trace_contours, Contour, DEFAULT_MIN_PERIMETER};
pub use otsu::{histogram, otsu_binarize, otsu_threshold};
pub use polygon::{max_deviation, polygonize, simplify_ring};
