//! Special functions and quadrature.

mod airy;
mod quad;

pub use airy::{ai, airy, airy_reflected, AiryValue, AI0, AIP0_NEG};
pub use quad::{
    gauss_legendre, integrate, integrate_real, integrate_with, QuadResult, QuadratureSpec,
    Singularity,
};
