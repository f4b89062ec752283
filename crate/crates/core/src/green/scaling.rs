use super::kernel::KernelSpec;
use super::matrix_norms::DistortedResolvents;
use crate::error::Result;
use crate::fit::{fit_slope, Expectation, SlopeFit};
use crate::model::PotentialModel;
use crate::spectral::Discretization;
use crate::wkb::{Side, WkbConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Point of the lower contour half-way between its real rays, `lambda0 - i delta0 h / 2`.
pub fn contour_probe(lambda0: f64, delta0: f64, h: f64) -> Complex64 {
    Complex64::new(lambda0, -0.5 * delta0 * h)
}

/// Operator norms at one `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub h: f64,
    pub z: Complex64,
    pub k2_left: f64,
    pub k1_left: f64,
    pub r1: f64,
    pub r2_plus: f64,
    pub r2_minus: f64,
    pub m_plus: f64,
    pub m_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormOptions {
    pub wkb: WkbConfig,
    /// Grid multiplier of the banded resolvents.
    pub multiplier: f64,
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            wkb: WkbConfig::default(),
            multiplier: 1.0,
            rel_tol: 1e-6,
            seed: 11,
        }
    }
}

pub fn norm_row(m: &PotentialModel, h: f64, z: Complex64, opts: &NormOptions) -> Result<NormRow> {
    let k2 = KernelSpec::new(m, h, 2, Side::Left, z, &opts.wkb)?;
    let k1 = KernelSpec::new(m, h, 1, Side::Left, z, &opts.wkb)?;
    let k2_left = k2.operator_norm(opts.rel_tol, opts.seed)?;
    let k1_left = k1.operator_norm(opts.rel_tol, opts.seed)?;
    let disc = Discretization::new(m, h, opts.multiplier)?;
    let dist = opts.wkb.distortion;
    let plus = DistortedResolvents::new(m, &disc, &dist, z)?.norms(opts.rel_tol, opts.seed)?;
    let minus =
        DistortedResolvents::new(m, &disc, &dist.flipped(), z)?.norms(opts.rel_tol, opts.seed)?;
    Ok(NormRow {
        h,
        z,
        k2_left,
        k1_left,
        r1: plus.resolvent1,
        r2_plus: plus.resolvent2,
        r2_minus: minus.resolvent2,
        m_plus: plus.m_operator,
        m_minus: minus.m_operator,
    })
}

/// Expected log-log slopes of the tabulated norms.
pub const NORM_SLOPES: [(&str, f64); 6] = [
    ("k2_left", -2.0 / 3.0),
    ("k1_left", -7.0 / 6.0),
    ("r2_plus", -7.0 / 6.0),
    ("r2_minus", -7.0 / 6.0),
    ("m_plus", 1.0 / 6.0),
    ("m_minus", 1.0 / 6.0),
];

pub const NORM_SLOPE_TOLERANCE: f64 = 0.15;

fn column(row: &NormRow, name: &str) -> f64 {
    match name {
        "k2_left" => row.k2_left,
        "k1_left" => row.k1_left,
        "r2_plus" => row.r2_plus,
        "r2_minus" => row.r2_minus,
        "m_plus" => row.m_plus,
        "m_minus" => row.m_minus,
        _ => row.r1,
    }
}

/// Slope fits of every tabulated norm against its expected slope.
pub fn norm_fits(rows: &[NormRow]) -> Result<Vec<SlopeFit>> {
    NORM_SLOPES
        .iter()
        .map(|&(name, target)| {
            let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.h, column(r, name))).collect();
            Ok(fit_slope(name, &pairs)?.expect(Expectation::Within {
                target,
                tolerance: NORM_SLOPE_TOLERANCE,
            }))
        })
        .collect()
}
