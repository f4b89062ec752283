//! Band linear algebra used by the discretized operators.

mod banded;
mod power;
mod scalar;
mod symband;

pub use banded::{BandMatrix, BandedLu};
pub use power::{euclidean_norm, power_norm};
pub use scalar::Scalar;
pub use symband::{count_below, eigenvalues_in, inverse_iteration};
