#![allow(clippy::needless_range_loop, clippy::excessive_precision)]

pub mod asym;
pub mod cutoff;
pub mod dynamics;
pub mod error;
pub mod fit;
pub mod green;
pub mod linalg;
pub mod model;
pub mod roots;
pub mod specfun;
pub mod spectral;
pub mod wkb;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
