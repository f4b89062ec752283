//! Closed-form ingredients of the small-`h` survival amplitude.

mod airy_integrals;
mod contour;
mod leading;
mod numerics;

pub use airy_integrals::{a0_closed, a0_convolution, ab_integrals, AbIntegrals, CONVOLUTION_LIMIT};
pub use contour::{f_contour, ContourPath};
pub use leading::{q0, q0_on, t0_leading, AsymptoticCoefficients};
pub use numerics::{assembled_t0, coupled_ground_state, CoupledGroundState};
