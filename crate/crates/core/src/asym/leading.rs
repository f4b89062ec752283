use super::airy_integrals::{a0_closed, AbIntegrals};
use super::contour::{f_contour, ContourPath};
use crate::cutoff::PlateauBump;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Model and state constants entering the leading correction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCoefficients {
    pub tau1: f64,
    pub tau2: f64,
    pub c0: f64,
    /// Coupling `a0` at the crossing.
    pub a0_at_0: f64,
    pub lambda0: f64,
    pub h: f64,
}

impl AsymptoticCoefficients {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.tau1, self.tau2, self.c0, self.h];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite()))
            || self.a0_at_0 < 0.0
            || !self.lambda0.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "asymptotic coefficients out of range: {self:?}"
            )));
        }
        Ok(())
    }

    /// `mu0 = lambda0 h^{-2/3}`.
    pub fn mu0(&self) -> f64 {
        self.lambda0 * self.h.powf(-2.0 / 3.0)
    }

    /// `4 a0(0)^2 c0^2 A0(mu0)^2`, the modulus scale of `q0` before `F`.
    pub fn amplitude(&self) -> Result<f64> {
        let a = a0_closed(self.mu0(), self.tau1, self.tau2)?;
        Ok(4.0 * (self.a0_at_0 * self.c0 * a).powi(2))
    }
}

/// `q0(t) = 4 a0(0)^2 c0^2 e^{-i t lambda0} A0(mu0)^2 F(h t)` given `F(h t)`.
pub fn q0(t: f64, coeffs: &AsymptoticCoefficients, f_ht: Complex64) -> Result<Complex64> {
    coeffs.validate()?;
    Ok(Complex64::from_polar(coeffs.amplitude()?, -t * coeffs.lambda0) * f_ht)
}

/// `q0(t)` with `F(h t)` evaluated on the given contour.
pub fn q0_on(
    t: f64,
    coeffs: &AsymptoticCoefficients,
    path: &ContourPath,
    g0: &PlateauBump,
) -> Result<Complex64> {
    q0(t, coeffs, f_contour(coeffs.h * t, path, g0)?)
}

/// Leading term `8 i pi h^{-1/3} c0^2 a0(0)^2 (A^- + A^+)^2` of `T0`.
pub fn t0_leading(coeffs: &AsymptoticCoefficients, ab: &AbIntegrals) -> Complex64 {
    let s = ab.a_minus + ab.a_plus;
    Complex64::new(
        0.0,
        8.0 * PI * coeffs.h.powf(-1.0 / 3.0) * (coeffs.c0 * coeffs.a0_at_0 * s).powi(2),
    )
}
