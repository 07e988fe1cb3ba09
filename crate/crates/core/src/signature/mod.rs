//! Path signatures and log-signatures of planar piecewise-linear paths.

mod hall;
mod tensor;

pub use hall::{witt_dims, HallBasis, LogSigVector, LyndonWord, BASIS_CONVENTION, LIE_RESIDUAL_TOL};
pub use tensor::{chen_concat, path_signature, segment_signature, tensor_exp, tensor_log, TensorSeries};

use crate::error::Result;

/// Projects a Lie element onto the Lyndon basis of matching depth.
///
/// Builds the basis on every call; hold a [`HallBasis`] when projecting many series.
pub fn hall_project(lie: &TensorSeries) -> Result<LogSigVector> {
    HallBasis::new(lie.depth())?.project(lie)
}

/// Log-signature of the path through `points` in the given basis.
pub fn log_signature(points: &[[f64; 2]], basis: &HallBasis) -> Result<LogSigVector> {
    let sig = path_signature(points, basis.depth())?;
    basis.project(&tensor_log(&sig)?)
}
