use super::action::{action, bohr_sommerfeld, nearest_index};
use super::solutions::{fundamental_solution, Kind, Side, WkbConfig};
use crate::error::{Error, Result};
use crate::linalg::{count_below, eigenvalues_in, inverse_iteration, BandMatrix};
use crate::model::PotentialModel;
use crate::spectral::{discretize, Discretization};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Grid refinement used for the channel-1 eigenproblem.
pub const GROUND_MULTIPLIER: f64 = 2.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundStateData {
    pub lambda0: f64,
    pub disc: Discretization,
    /// `L^2`-normalized eigenfunction on `disc`.
    pub phi0: Vec<f64>,
    /// Least-squares coefficient in `phi0 ~ c0 h^{-1/6} u^-_{1,L}(lambda0)` on `x <= 0`.
    pub c0: f64,
    /// `int dx / sqrt(lambda0 - V1)` between the turning points.
    pub turning_integral: f64,
    pub k_index: i64,
    /// `||(P1 - lambda0) phi0||` in the grid norm.
    pub residual: f64,
}

impl GroundStateData {
    /// `(pi/2) / int dx / sqrt(lambda0 - V1)`, the value `c0^2` tends to.
    pub fn c0_sq_reciprocal(&self) -> f64 {
        0.5 * PI / self.turning_integral
    }

    /// `(2/pi) int dx / sqrt(lambda0 - V1)`.
    pub fn c0_sq_integral(&self) -> f64 {
        2.0 / PI * self.turning_integral
    }
}

/// Interval centred on the quantization value nearest 0 that contains
/// exactly one level: half the level spacing on either side.
pub fn default_window(m: &PotentialModel, h: f64) -> Result<(f64, f64)> {
    let k = nearest_index(m, h, 0.0)?;
    let e = bohr_sommerfeld(m, h, k, f64::INFINITY)?;
    let half = 0.5 * PI * h / action(m, 0.0)?.action_derivative;
    Ok((e - half, e + half))
}

/// Real symmetric band matrix of the undistorted `P1`.
pub fn channel_one_matrix(m: &PotentialModel, disc: &Discretization) -> Result<BandMatrix<f64>> {
    Ok(discretize(m, disc, None)?.p1.map(|v: Complex64| v.re))
}

pub fn ground_state(m: &PotentialModel, h: f64, window: (f64, f64)) -> Result<GroundStateData> {
    ground_state_on(m, &Discretization::new(m, h, GROUND_MULTIPLIER)?, window)
}

pub fn ground_state_on(
    m: &PotentialModel,
    disc: &Discretization,
    window: (f64, f64),
) -> Result<GroundStateData> {
    let h = disc.h;
    let (lo, hi) = window;
    let a = channel_one_matrix(m, disc)?;
    let count = count_below(&a, hi) - count_below(&a, lo);
    if count != 1 {
        return Err(Error::WindowCount { lo, hi, count });
    }
    let lambda0 = eigenvalues_in(&a, lo, hi, 1e-14 * (1.0 + hi.abs()))[0];
    let mut phi = inverse_iteration(&a, lambda0, &[])?;
    let norm = (phi.iter().map(|v| v * v).sum::<f64>() * disc.dx).sqrt();
    phi.iter_mut().for_each(|v| *v /= norm);

    let u = fundamental_solution(
        m,
        h,
        1,
        Side::Left,
        Kind::Minus,
        Complex64::new(lambda0, 0.0),
        &WkbConfig::default(),
    )?;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..=disc.zero {
        let ui = u.sample(disc.x(i))[0].re;
        num += phi[i] * ui;
        den += ui * ui;
    }
    let mut c0 = num / den * h.powf(1.0 / 6.0);
    if c0 < 0.0 {
        c0 = -c0;
        phi.iter_mut().for_each(|v| *v = -*v);
    }
    let r = a.matvec(&phi);
    let residual = (r
        .iter()
        .zip(&phi)
        .map(|(p, q)| (p - lambda0 * q).powi(2))
        .sum::<f64>()
        * disc.dx)
        .sqrt();
    let turning_integral = 2.0 * action(m, lambda0)?.action_derivative;
    Ok(GroundStateData {
        lambda0,
        disc: *disc,
        phi0: phi,
        c0,
        turning_integral,
        k_index: nearest_index(m, h, lambda0)?,
        residual,
    })
}
