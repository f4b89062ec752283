use super::cutoff::CutoffSpec;
use super::ExactAmplitude;
use crate::error::{Error, Result};
use crate::model::PotentialModel;
use crate::specfun::gauss_legendre;
use crate::spectral::{discretize, Discretization, DistortionProfile};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityOptions {
    /// Gauss-Legendre points per panel.
    pub order: usize,
    /// Minimum number of panels on the plateau.
    pub plateau_panels: usize,
    /// Minimum number of panels on each transition of the cutoff.
    pub transition_panels: usize,
    /// Largest phase `t_max * (panel width)` accepted on a panel.
    pub phase_per_panel: f64,
}

impl Default for DensityOptions {
    fn default() -> Self {
        Self {
            order: 16,
            plateau_panels: 24,
            transition_panels: 6,
            phase_per_panel: PI,
        }
    }
}

/// Quadrature of `g(lambda) dmu(lambda)` for the spectral measure of `phi`,
/// with the density `(1/pi) Im <(H - lambda - i0)^{-1} phi, phi>` taken from
/// the complex-scaled system and nodes clustered about the resonance by
/// `lambda = Re rho + |Im rho| tan(u)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralDensity {
    pub nodes: Vec<f64>,
    /// `g mu' dlambda` at each node.
    pub weights: Vec<f64>,
    /// Density `mu'` at each node.
    pub density: Vec<f64>,
    /// Largest time the panels resolve.
    pub t_max: f64,
}

fn panels(
    u0: f64,
    u1: f64,
    min_panels: usize,
    cap: f64,
    lambda: &impl Fn(f64) -> f64,
) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut stack: Vec<(f64, f64)> = (0..min_panels)
        .rev()
        .map(|k| {
            let a = u0 + (u1 - u0) * k as f64 / min_panels as f64;
            let b = u0 + (u1 - u0) * (k + 1) as f64 / min_panels as f64;
            (a, b)
        })
        .collect();
    while let Some((a, b)) = stack.pop() {
        if (lambda(b) - lambda(a)).abs() > cap {
            let c = 0.5 * (a + b);
            stack.push((c, b));
            stack.push((a, c));
        } else {
            out.push((a, b));
        }
    }
    out
}

impl SpectralDensity {
    /// `phi` is interleaved and real on `disc`; `resonance` centres the node map.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m: &PotentialModel,
        disc: &Discretization,
        distortion: &DistortionProfile,
        phi: &[f64],
        spec: &CutoffSpec,
        resonance: Complex64,
        t_max: f64,
        opts: &DensityOptions,
    ) -> Result<Self> {
        if phi.len() != 2 * disc.n {
            return Err(Error::Shape(format!(
                "state has {} entries, system has {}",
                phi.len(),
                2 * disc.n
            )));
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_max = {t_max}")));
        }
        if distortion.theta <= 0.0 {
            return Err(Error::InvalidParameter(
                "density route needs theta > 0".into(),
            ));
        }
        let (a, b) = spec.support();
        let (p, q) = spec.plateau();
        let center = resonance.re;
        let width = resonance.im.abs().max(1e-6 * spec.h);
        let lambda = |u: f64| center + width * u.tan();
        let u = |l: f64| ((l - center) / width).atan();
        let phase_cap = opts.phase_per_panel / t_max;
        let transition_cap = ((p - a) / opts.transition_panels as f64).min(phase_cap);
        let mut pieces = panels(u(a), u(p), opts.transition_panels, transition_cap, &lambda);
        pieces.extend(panels(u(p), u(q), opts.plateau_panels, phase_cap, &lambda));
        pieces.extend(panels(
            u(q),
            u(b),
            opts.transition_panels,
            transition_cap,
            &lambda,
        ));

        let (gx, gw) = gauss_legendre(opts.order);
        let mut nodes = Vec::new();
        let mut jac = Vec::new();
        for (ua, ub) in pieces {
            let (mid, half) = (0.5 * (ua + ub), 0.5 * (ub - ua));
            for (x, w) in gx.iter().zip(&gw) {
                let uu = mid + half * x;
                nodes.push(lambda(uu));
                jac.push(w * half * width / uu.cos().powi(2));
            }
        }
        let ops = discretize(m, disc, Some(distortion))?;
        let system = ops.system();
        let rhs: Vec<Complex64> = phi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        log::debug!(
            "spectral density: {} nodes on a system of size {}",
            nodes.len(),
            system.n()
        );
        let density: Vec<f64> = nodes
            .par_iter()
            .map(|&l| {
                let x = system.shifted(Complex64::new(l, 0.0)).factor()?.solve(&rhs);
                Ok(ops.pairing2(&x, &rhs).im / PI)
            })
            .collect::<Result<_>>()?;
        let weights = nodes
            .iter()
            .zip(&density)
            .zip(&jac)
            .map(|((&l, &d), &j)| spec.value(l) * d * j)
            .collect();
        Ok(Self {
            nodes,
            weights,
            density,
            t_max,
        })
    }

    /// `int g dmu`, the amplitude at `t = 0`.
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

impl ExactAmplitude for SpectralDensity {
    fn amplitude(&self, t: f64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&l, &w)| Complex64::from_polar(w, -t * l))
            .sum()
    }

    fn horizon(&self) -> f64 {
        self.t_max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panels_respect_the_cap() {
        let map = |u: f64| 2.0 * u.tan();
        let p = panels(-1.2, 1.3, 4, 0.05, &map);
        assert!(p.len() > 4);
        assert!(p.windows(2).all(|w| (w[0].1 - w[1].0).abs() < 1e-15));
        assert!(p.iter().all(|&(a, b)| (map(b) - map(a)).abs() <= 0.05));
        assert_eq!(p[0].0, -1.2);
        assert_eq!(p.last().unwrap().1, 1.3);
    }
}
