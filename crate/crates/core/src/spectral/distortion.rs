use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Exterior complex scaling `x -> x + i theta nu(x)` with
/// `nu(x) = x S((x - x_inf)/ramp)` and `S` the C^3 septic smoothstep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionProfile {
    pub theta: f64,
    pub x_inf: f64,
    pub ramp: f64,
}

impl Default for DistortionProfile {
    fn default() -> Self {
        Self {
            theta: 0.2,
            x_inf: 2.0,
            ramp: 2.0,
        }
    }
}

fn smoothstep(t: f64) -> [f64; 3] {
    if t <= 0.0 {
        return [0.0; 3];
    }
    if t >= 1.0 {
        return [1.0, 0.0, 0.0];
    }
    let t2 = t * t;
    let t3 = t2 * t;
    let s = t3 * t * (35.0 - 84.0 * t + 70.0 * t2 - 20.0 * t3);
    let ds = 140.0 * t3 * (1.0 - t).powi(3);
    let dds = 420.0 * t2 * (1.0 - t).powi(2) * (1.0 - 2.0 * t);
    [s, ds, dds]
}

impl DistortionProfile {
    pub fn with_theta(theta: f64) -> Self {
        Self {
            theta,
            ..Self::default()
        }
    }

    pub fn flipped(&self) -> Self {
        Self {
            theta: -self.theta,
            ..*self
        }
    }

    /// `(nu, nu', nu'')`.
    pub fn nu(&self, x: f64) -> [f64; 3] {
        let [s, ds, dds] = smoothstep((x - self.x_inf) / self.ramp);
        let ds = ds / self.ramp;
        let dds = dds / (self.ramp * self.ramp);
        [x * s, s + x * ds, 2.0 * ds + x * dds]
    }

    pub fn path(&self, x: f64) -> Complex64 {
        Complex64::new(x, self.theta * self.nu(x)[0])
    }

    /// `J = dy/dx`.
    pub fn jacobian(&self, x: f64) -> Complex64 {
        Complex64::new(1.0, self.theta * self.nu(x)[1])
    }

    pub fn jacobian_slope(&self, x: f64) -> Complex64 {
        Complex64::new(0.0, self.theta * self.nu(x)[2])
    }

    /// First point beyond which the path is a straight ray.
    pub fn ray_start(&self) -> f64 {
        self.x_inf + self.ramp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_shape() {
        let d = DistortionProfile::default();
        assert_eq!(d.nu(1.9), [0.0; 3]);
        let [nu, nup, nupp] = d.nu(5.0);
        assert_eq!((nu, nup, nupp), (5.0, 1.0, 0.0));
        let mut prev = 0.0;
        for i in 0..=400 {
            let x = 2.0 + 2.0 * i as f64 / 400.0;
            let [v, dv, _] = d.nu(x);
            assert!(v >= prev && dv >= 0.0);
            prev = v;
        }
    }

    #[test]
    fn derivatives_consistent() {
        let d = DistortionProfile::default();
        for &x in &[2.3, 3.0, 3.7] {
            let e = 1e-5;
            let fd = (d.nu(x + e)[0] - d.nu(x - e)[0]) / (2.0 * e);
            assert!((fd - d.nu(x)[1]).abs() < 1e-8);
            let fd2 = (d.nu(x + e)[1] - d.nu(x - e)[1]) / (2.0 * e);
            assert!((fd2 - d.nu(x)[2]).abs() < 1e-7);
        }
    }
}
