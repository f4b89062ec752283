use crate::cutoff::PlateauBump;
use crate::error::{Error, Result};
use crate::linalg::count_below;
use crate::model::PotentialModel;
use crate::spectral::Discretization;
use crate::wkb::{action, channel_one_matrix};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default plateau and support half-widths as fractions of `pi / A'(0)`.
pub const DEFAULT_PLATEAU_FRACTION: f64 = 0.3;
pub const DEFAULT_SUPPORT_FRACTION: f64 = 0.6;

/// Energy cutoff `g(lambda) = g0((lambda - lambda0) / h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub profile: PlateauBump,
    pub lambda0: f64,
    pub h: f64,
}

impl CutoffSpec {
    pub fn new(profile: PlateauBump, lambda0: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite() && lambda0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cutoff needs h > 0 and finite lambda0, got {h}, {lambda0}"
            )));
        }
        Ok(Self {
            profile,
            lambda0,
            h,
        })
    }

    /// Default half-widths, checked against the level spacing `pi / A'(0)`.
    pub fn standard(m: &PotentialModel, lambda0: f64, h: f64) -> Result<Self> {
        let spacing = PI / action(m, 0.0)?.action_derivative;
        let spec = Self::new(
            PlateauBump::new(
                DEFAULT_PLATEAU_FRACTION * spacing,
                DEFAULT_SUPPORT_FRACTION * spacing,
            )?,
            lambda0,
            h,
        )?;
        spec.check_spacing(m)?;
        Ok(spec)
    }

    /// Requires `delta1 < pi / A'(0)`.
    pub fn check_spacing(&self, m: &PotentialModel) -> Result<()> {
        let spacing = PI / action(m, 0.0)?.action_derivative;
        if self.profile.delta1 >= spacing {
            return Err(Error::InvalidParameter(format!(
                "delta1 = {} must stay below pi/A'(0) = {spacing}",
                self.profile.delta1
            )));
        }
        Ok(())
    }

    pub fn value(&self, lambda: f64) -> f64 {
        self.profile.value((lambda - self.lambda0) / self.h)
    }

    /// Open interval outside which `g` vanishes.
    pub fn support(&self) -> (f64, f64) {
        let r = self.profile.delta1 * self.h;
        (self.lambda0 - r, self.lambda0 + r)
    }

    /// Interval on which `g = 1`.
    pub fn plateau(&self) -> (f64, f64) {
        let r = self.profile.delta0 * self.h;
        (self.lambda0 - r, self.lambda0 + r)
    }

    /// Requires exactly one eigenvalue of the well channel on `disc` inside the support.
    pub fn validate_levels(&self, m: &PotentialModel, disc: &Discretization) -> Result<()> {
        let (lo, hi) = self.support();
        let a = channel_one_matrix(m, disc)?;
        let count = count_below(&a, hi) - count_below(&a, lo);
        if count != 1 {
            return Err(Error::WindowCount { lo, hi, count });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::default_model;
    use crate::wkb::{default_window, ground_state};

    #[test]
    fn standard_cutoff_isolates_one_level() {
        let m = default_model();
        let h = 0.04;
        let g = ground_state(&m, h, default_window(&m, h).unwrap()).unwrap();
        let spec = CutoffSpec::standard(&m, g.lambda0, h).unwrap();
        spec.validate_levels(&m, &g.disc).unwrap();
        assert_eq!(spec.value(g.lambda0), 1.0);
        let (lo, hi) = spec.support();
        assert_eq!(spec.value(lo), 0.0);
        assert_eq!(spec.value(hi), 0.0);
    }

    #[test]
    fn wide_support_is_refused() {
        let m = default_model();
        let h = 0.04;
        let g = ground_state(&m, h, default_window(&m, h).unwrap()).unwrap();
        let spacing = PI / action(&m, 0.0).unwrap().action_derivative;
        let wide = CutoffSpec::new(
            PlateauBump::new(spacing, 2.5 * spacing).unwrap(),
            g.lambda0,
            h,
        )
        .unwrap();
        assert!(wide.check_spacing(&m).is_err());
        assert!(wide.validate_levels(&m, &g.disc).is_err());
    }
}
