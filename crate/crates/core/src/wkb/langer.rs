use crate::error::Result;
use crate::model::PotentialModel;
use crate::roots::{second_derivative, slope};
use crate::specfun::{integrate_with, QuadratureSpec, Singularity};
use num_complex::Complex64;

/// Langer coordinate `xi` with `xi * xi'^2 = V - E`, positive on the
/// classically forbidden side of a simple turning point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LangerPoint {
    pub xi: f64,
    pub slope: f64,
    pub curvature: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct LangerMap {
    pub channel: usize,
    pub energy: f64,
    pub turning_point: f64,
    // Taylor data of V - E at the turning point
    a1: f64,
    a2: f64,
    a3: f64,
}

const SERIES_RADIUS: f64 = 1e-3;

impl LangerMap {
    pub fn new(m: &PotentialModel, channel: usize, energy: f64, turning_point: f64) -> Self {
        let v = |x: f64| m.potential(channel, x);
        let a1 = slope(v, turning_point, 1e-4);
        let a2 = second_derivative(v, turning_point, 1e-3) / 2.0;
        let s = 2e-3;
        let a3 = (second_derivative(v, turning_point + s, 1e-3)
            - second_derivative(v, turning_point - s, 1e-3))
            / (2.0 * s)
            / 6.0;
        Self {
            channel,
            energy,
            turning_point,
            a1,
            a2,
            a3,
        }
    }

    pub fn eval(&self, m: &PotentialModel, x: f64) -> Result<LangerPoint> {
        let s = x - self.turning_point;
        let c1 = self.a1.cbrt();
        let c2 = self.a2 / (5.0 * c1 * c1);
        let c3 = (self.a3 - 8.0 * c1 * c2 * c2) / (7.0 * c1 * c1);
        if s.abs() < SERIES_RADIUS {
            return Ok(LangerPoint {
                xi: s * (c1 + s * (c2 + s * c3)),
                slope: c1 + s * (2.0 * c2 + 3.0 * c3 * s),
                curvature: 2.0 * c2 + 6.0 * c3 * s,
            });
        }
        let gap = |t: f64| m.potential(self.channel, t) - self.energy;
        let spec = QuadratureSpec {
            abs_tol: 1e-15,
            rel_tol: 1e-13,
            max_subdivisions: 4000,
        };
        let sing = if s > 0.0 {
            Singularity::Left
        } else {
            Singularity::Right
        };
        let (a, b) = if s > 0.0 {
            (self.turning_point, x)
        } else {
            (x, self.turning_point)
        };
        let integral = integrate_with(
            |t| Complex64::new(gap(t).abs().sqrt(), 0.0),
            a,
            b,
            &spec,
            sing,
        )?
        .value
        .re;
        let g = gap(x);
        let xi = g.signum() * (1.5 * integral).powf(2.0 / 3.0);
        let dxi = c1.signum() * (g / xi).sqrt();
        let vp = slope(|t| m.potential(self.channel, t), x, 1e-4);
        Ok(LangerPoint {
            xi,
            slope: dxi,
            curvature: (vp - dxi.powi(3)) / (2.0 * xi * dxi),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::default_model;
    use crate::wkb::action::turning_point;

    #[test]
    fn linear_potential_is_its_own_langer_variable() {
        use std::sync::Arc;
        let m = PotentialModel::from_profiles(
            "linear",
            Arc::new(|y| y),
            Arc::new(|y| -y),
            Arc::new(|_| Complex64::new(0.0, 0.0)),
            Arc::new(|_| Complex64::new(0.0, 0.0)),
            (-5.0, 5.0),
        );
        let map = LangerMap::new(&m, 1, 0.3, 0.3);
        for &x in &[-1.0, 0.2999, 0.5, 2.0] {
            let p = map.eval(&m, x).unwrap();
            assert!((p.xi - (x - 0.3)).abs() < 1e-10, "{x} {p:?}");
            assert!((p.slope - 1.0).abs() < 1e-8 && p.curvature.abs() < 1e-5);
        }
        let map2 = LangerMap::new(&m, 2, 0.0, 0.0);
        let p = map2.eval(&m, -1.0).unwrap();
        assert!((p.xi - 1.0).abs() < 1e-10 && (p.slope + 1.0).abs() < 1e-8);
    }

    #[test]
    fn series_and_integral_agree_and_satisfy_identity() {
        let m = default_model();
        let e = 0.01;
        for &(j, start, dir) in &[(1usize, -0.5, 1.0), (2usize, 0.5, -1.0)] {
            let xt = turning_point(&m, j, e, start, dir, true).unwrap();
            let map = LangerMap::new(&m, j, e, xt);
            let inside = map.eval(&m, xt + 0.99 * SERIES_RADIUS).unwrap();
            let outside = map.eval(&m, xt + 1.01 * SERIES_RADIUS).unwrap();
            let gap = 0.02 * SERIES_RADIUS;
            assert!(
                (outside.xi - inside.xi - inside.slope * gap).abs() < 1e-10,
                "{inside:?} {outside:?}"
            );
            assert!((outside.slope - inside.slope - inside.curvature * gap).abs() < 1e-8);
            for &x in &[xt - 0.7, xt - 0.1, xt + 0.1, xt + 0.6] {
                let p = map.eval(&m, x).unwrap();
                let g = m.potential(j, x) - e;
                assert!((p.xi * p.slope * p.slope - g).abs() < 1e-11);
                assert!(p.xi * g >= 0.0);
                let fd = (map.eval(&m, x + 1e-5).unwrap().slope
                    - map.eval(&m, x - 1e-5).unwrap().slope)
                    / 2e-5;
                assert!(
                    (fd - p.curvature).abs() < 1e-5,
                    "{j} {x} {fd} {}",
                    p.curvature
                );
            }
        }
    }
}
