use crate::cutoff::PlateauBump;
use crate::error::{Error, Result};
use crate::specfun::{integrate, QuadratureSpec};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Real axis with `(-radius, radius)` replaced by the lower half circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourPath {
    pub radius: f64,
}

impl ContourPath {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("contour radius {radius}")));
        }
        Ok(Self { radius })
    }

    /// Point of the half circle at angle `alpha` in `[pi, 2 pi]`.
    pub fn arc_point(&self, alpha: f64) -> Complex64 {
        Complex64::from_polar(self.radius, alpha)
    }
}

/// `-2i int e^{-i lambda z} g0(Re z) / z^2 dz` along the path; the rays end
/// where `g0` vanishes.
pub fn f_contour(lambda: f64, path: &ContourPath, g0: &PlateauBump) -> Result<Complex64> {
    let spec = QuadratureSpec::tight();
    let r = path.radius;
    let ray = |x: f64| Complex64::new(0.0, -lambda * x).exp() * (g0.value(x) / (x * x));
    let mut total = Complex64::new(0.0, 0.0);
    if g0.delta1 > r {
        // split at the plateau edge where g0 stops being analytic
        let edge = g0.delta0.max(r);
        for (a, b) in [(r, edge), (edge, g0.delta1)] {
            total += integrate(ray, a, b, &spec)? + integrate(ray, -b, -a, &spec)?;
        }
    }
    // dz = i z d(alpha)
    let arc = |alpha: f64| {
        let z = path.arc_point(alpha);
        (-Complex64::i() * lambda * z).exp() * g0.value(z.re) * Complex64::i() / z
    };
    total += integrate(arc, PI, 2.0 * PI, &spec)?;
    Ok(Complex64::new(0.0, -2.0) * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero_matches_primitive() {
        // int_arc dz / z^2 = -2/r and the rays give 2 int g0 / x^2
        let g = PlateauBump::new(0.5, 1.0).unwrap();
        let f = f_contour(0.0, &ContourPath::new(0.5).unwrap(), &g).unwrap();
        let rays = 2.0
            * crate::specfun::integrate_real(
                |x| g.value(x) / (x * x),
                0.5,
                1.0,
                &QuadratureSpec::tight(),
            )
            .unwrap();
        let expect = Complex64::new(0.0, -2.0) * (rays - 2.0 / 0.5);
        assert!((f - expect).norm() < 1e-12);
        assert!(f.re.abs() < 1e-12 && f.im >= 4.0 / g.delta1);
    }
}
