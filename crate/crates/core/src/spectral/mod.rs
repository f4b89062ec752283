mod box_eigen;
mod distortion;
mod grid;
mod operators;
mod resonance;

pub use box_eigen::{eigendecompose_box, system_matrix, BoxSpectrum, DENSE_LIMIT};
pub use distortion::DistortionProfile;
pub use grid::{Discretization, D1_STENCIL, D2_STENCIL};
pub use operators::{discretize, interleave, interleaved, l2_norm, split, DistortedOperators};
pub use resonance::{nearest_eigenpair, resonance, ResonanceOptions, ResonanceResult};
