use super::ExactAmplitude;
use crate::asym::{f_contour, q0, AsymptoticCoefficients, ContourPath};
use crate::cutoff::PlateauBump;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `e^{-i t rho0} b + h^{2/3} q0(t, h)`, with the correction optionally dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Predictor {
    pub rho0: Complex64,
    pub b: Complex64,
    pub coeffs: AsymptoticCoefficients,
    pub path: ContourPath,
    pub profile: PlateauBump,
    pub with_correction: bool,
}

impl Predictor {
    pub fn pole(&self, t: f64) -> Complex64 {
        (Complex64::new(0.0, -t) * self.rho0).exp() * self.b
    }

    /// `h^{2/3} q0(t, h)` with the contour function entering as
    /// `(i/2) F(h t) = int e^{-i h t z} g0(Re z) / z^2 dz`; zero when the
    /// correction is dropped.
    pub fn correction(&self, t: f64) -> Result<Complex64> {
        if !self.with_correction {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let f = f_contour(self.coeffs.h * t, &self.path, &self.profile)?;
        Ok(self.coeffs.h.powf(2.0 / 3.0) * q0(t, &self.coeffs, 0.5 * Complex64::i() * f)?)
    }

    pub fn value(&self, t: f64) -> Result<Complex64> {
        Ok(self.pole(t) + self.correction(t)?)
    }

    pub fn without_correction(&self) -> Self {
        Self {
            with_correction: false,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalTrace {
    pub h: f64,
    pub times: Vec<f64>,
    pub amplitude: Vec<Complex64>,
    pub predictor: Vec<Complex64>,
    /// The `h^{2/3} q0` part of the predictor.
    pub correction: Vec<Complex64>,
    pub residual: Vec<Complex64>,
}

impl SurvivalTrace {
    pub fn max_residual(&self) -> f64 {
        self.residual.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// `max |residual| <ht>^power` over `lo <= t <= hi`.
    pub fn weighted_residual(&self, lo: f64, hi: f64, power: i32) -> f64 {
        self.times
            .iter()
            .zip(&self.residual)
            .filter(|(&t, _)| t >= lo && t <= hi)
            .map(|(&t, r)| r.norm() * (1.0 + (self.h * t).powi(2)).sqrt().powi(power))
            .fold(0.0, f64::max)
    }
}

/// Exact amplitude, predictor and residual at `times`; times past the
/// horizon of `exact` are dropped with a warning.
pub fn survival_amplitude(
    exact: &dyn ExactAmplitude,
    predictor: &Predictor,
    times: &[f64],
) -> Result<SurvivalTrace> {
    if times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("times must be sorted".into()));
    }
    let h = predictor.coeffs.h;
    let horizon = exact.horizon();
    let kept: Vec<f64> = times
        .iter()
        .copied()
        .filter(|t| t.abs() <= horizon)
        .collect();
    if kept.len() < times.len() {
        log::warn!(
            "dropped {} times beyond the horizon {horizon}",
            times.len() - kept.len()
        );
    }
    let amplitude: Vec<Complex64> = kept.iter().map(|&t| exact.amplitude(t)).collect();
    let correction = kept
        .iter()
        .map(|&t| predictor.correction(t))
        .collect::<Result<Vec<_>>>()?;
    let predictor: Vec<Complex64> = kept
        .iter()
        .zip(&correction)
        .map(|(&t, c)| predictor.pole(t) + c)
        .collect();
    let residual = amplitude
        .iter()
        .zip(&predictor)
        .map(|(a, p)| a - p)
        .collect();
    Ok(SurvivalTrace {
        h,
        times: kept,
        amplitude,
        predictor,
        correction,
        residual,
    })
}

/// Smallest `|F|` treated as resolved by the contour quadrature.
pub const F_RESOLUTION: f64 = 1e-12;

/// First time the correction outgrows the pole term, against the
/// reference `(2/3) |ln h| / |Im rho0|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalTimeReport {
    /// `None` when the pole term was never overtaken.
    pub crossing: Option<f64>,
    /// Last time at which `F(h t)` was resolved.
    pub resolved_until: f64,
    /// Lower bound on the crossing when `crossing` is `None`.
    pub lower_bound: f64,
    pub reference: f64,
}

impl CriticalTimeReport {
    /// The crossing, or the lower bound established for it.
    pub fn estimate(&self) -> f64 {
        self.crossing.unwrap_or(self.lower_bound)
    }
}

/// Scans sorted `times` for the first `t` with `|h^{2/3} q0(t)| > |e^{-i t rho0} b|`,
/// refining the crossing by bisection. Once `|F(h t)|` stays below
/// [`F_RESOLUTION`] at two consecutive times the correction is bounded by
/// its value at `|F| = F_RESOLUTION`, and the time at which the pole term
/// decays to that bound is returned as a lower bound.
pub fn critical_time_report(predictor: &Predictor, times: &[f64]) -> Result<CriticalTimeReport> {
    if times.is_empty() || times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter(
            "times must be sorted and non-empty".into(),
        ));
    }
    let h = predictor.coeffs.h;
    let width = predictor.rho0.im.abs();
    let reference = 2.0 / 3.0 * h.ln().abs() / width;
    let ahead =
        |t: f64| -> Result<bool> { Ok(predictor.correction(t)?.norm() > predictor.pole(t).norm()) };
    let mut resolved_until = times[0];
    let mut unresolved = 0;
    let mut previous: Option<f64> = None;
    for &t in times {
        if ahead(t)? {
            let mut lo = previous.unwrap_or(t);
            let mut hi = t;
            for _ in 0..60 {
                if hi - lo <= 1e-10 * hi.abs().max(1.0) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if ahead(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(CriticalTimeReport {
                crossing: Some(hi),
                resolved_until: t,
                lower_bound: hi,
                reference,
            });
        }
        if predictor.with_correction
            && f_contour(h * t, &predictor.path, &predictor.profile)?.norm() < F_RESOLUTION
        {
            unresolved += 1;
            if unresolved == 2 {
                let ceiling =
                    h.powf(2.0 / 3.0) * predictor.coeffs.amplitude()? * 0.5 * F_RESOLUTION;
                let decayed = (predictor.b.norm() / ceiling).ln() / width;
                return Ok(CriticalTimeReport {
                    crossing: None,
                    resolved_until,
                    lower_bound: decayed.max(resolved_until),
                    reference,
                });
            }
        } else {
            unresolved = 0;
            resolved_until = t;
        }
        previous = Some(t);
    }
    Ok(CriticalTimeReport {
        crossing: None,
        resolved_until,
        lower_bound: resolved_until,
        reference,
    })
}
