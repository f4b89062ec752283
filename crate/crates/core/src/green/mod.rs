mod envelope;
mod kernel;
mod matrix_norms;
mod resolvent;
mod scaling;

pub use envelope::{envelope_check, ClauseReport, Decay, EnvelopeReport, EnvelopeSpec, Space};
pub use kernel::{KernelOutput, KernelSpec};
pub use matrix_norms::{DistortedResolvents, MatrixNorms};
pub use resolvent::{
    CouplingOperator, JoinedGrid, Resolvent, ResolventCoefficients, ResolventOutput,
    EIGENVALUE_GUARD,
};
pub use scaling::{
    contour_probe, norm_fits, norm_row, NormOptions, NormRow, NORM_SLOPES, NORM_SLOPE_TOLERANCE,
};
