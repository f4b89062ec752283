use thiserror::Error;

/// Failure modes shared across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {value} outside supported range: {what}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("Bi({x}) overflows f64; use a scaled evaluation")]
    Overflow { x: f64 },

    #[error("quadrature did not converge after {subdivisions} subdivisions; worst interval [{worst_a}, {worst_b}] error {worst_error:e}")]
    Quadrature {
        subdivisions: usize,
        worst_a: f64,
        worst_b: f64,
        worst_error: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("model rejected: {0}")]
    Model(String),

    #[error("no sign change of {what} on [{a}, {b}]")]
    Bracket { what: String, a: f64, b: f64 },

    #[error("energy {energy} outside well range: {reason}")]
    EnergyOutsideWell { energy: f64, reason: String },

    #[error("Bohr-Sommerfeld index {k} gives e_k = {value} outside window +/-{window}")]
    IndexOutOfWindow { k: i64, value: f64, window: f64 },

    #[error("expected exactly one eigenvalue in [{lo}, {hi}], found {count}")]
    WindowCount { lo: f64, hi: f64, count: usize },

    #[error("grid too coarse: spacing {spacing} > required {required}; need n >= {required_n}")]
    Resolution {
        spacing: f64,
        required: f64,
        required_n: usize,
    },

    #[error("singular matrix at pivot {0}")]
    Singular(usize),

    #[error("iteration did not converge: {what} (last estimates {history:?})")]
    NoConvergence { what: String, history: Vec<f64> },

    #[error("resonance unstable under distortion change: {first} vs {second} (diff {diff:e})")]
    ThetaInstability {
        first: String,
        second: String,
        diff: f64,
    },

    #[error("integration blew up: {0}")]
    Integration(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("conditioning refusal: {0}")]
    Conditioning(String),
}

pub type Result<T> = std::result::Result<T, Error>;
