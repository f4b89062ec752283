//! Energy cutoff, filtered survival amplitude and its comparison with the
//! resonance-plus-correction predictor.

mod box_route;
mod cutoff;
mod density;
mod setup;
mod trace;

pub use box_route::{filtered_state, reflection_horizon, BoxAmplitude};
pub use cutoff::{CutoffSpec, DEFAULT_PLATEAU_FRACTION, DEFAULT_SUPPORT_FRACTION};
pub use density::{DensityOptions, SpectralDensity};
pub use setup::{survival_setup, SurvivalOptions, SurvivalSetup};
pub use trace::{
    critical_time_report, survival_amplitude, CriticalTimeReport, Predictor, SurvivalTrace,
    F_RESOLUTION,
};

use num_complex::Complex64;

/// Source of the exact amplitude `<e^{-itH} g(H) phi, phi>`.
pub trait ExactAmplitude: Sync {
    fn amplitude(&self, t: f64) -> Complex64;
    /// Largest `|t|` at which `amplitude` is trusted.
    fn horizon(&self) -> f64;
}
