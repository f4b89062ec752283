use super::distortion::DistortionProfile;
use super::grid::Discretization;
use super::operators::{discretize, interleaved, DistortedOperators};
use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::model::PotentialModel;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceOptions {
    pub distortion: DistortionProfile,
    /// Relative change of `theta` used for the stability check.
    pub theta_variation: f64,
    /// Largest accepted `|rho(theta) - rho(theta')|`.
    pub stability_tol: f64,
    pub residual_tol: f64,
    pub max_iterations: usize,
}

impl Default for ResonanceOptions {
    fn default() -> Self {
        Self {
            distortion: DistortionProfile::default(),
            theta_variation: 0.2,
            stability_tol: 1e-8,
            residual_tol: 1e-11,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResonanceResult {
    pub rho0: Complex64,
    /// Interleaved two-component eigenvector with `sum psi^2 J dx = 1`.
    pub psi0: Vec<Complex64>,
    /// `(sum psi phi dx)^2` for the initial state `phi = (phi0, 0)`.
    pub b: Complex64,
    pub k_index: i64,
    /// `rho0` recomputed at the varied `theta`.
    pub rho_varied: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

impl ResonanceResult {
    pub fn theta_drift(&self) -> f64 {
        (self.rho0 - self.rho_varied).norm()
    }
}

/// Eigenpair of a banded matrix nearest `shift` by shift-and-invert iteration
/// followed by Rayleigh-quotient refinement; returns `(value, vector, residual, iterations)`.
pub fn nearest_eigenpair(
    a: &BandMatrix<Complex64>,
    shift: Complex64,
    start: &[Complex64],
    residual_tol: f64,
    max_iterations: usize,
) -> Result<(Complex64, Vec<Complex64>, f64, usize)> {
    let norm = |v: &[Complex64]| v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let rayleigh = |v: &[Complex64]| {
        let av = a.matvec(v);
        let num: Complex64 = v.iter().zip(&av).map(|(x, y)| x.conj() * y).sum();
        let den: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        (num / den, av)
    };
    let mut v: Vec<Complex64> = start.to_vec();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut sigma = shift;
    let mut lu = a.shifted(sigma).factor()?;
    let mut history = Vec::new();
    let mut refactored = 0;
    for it in 1..=max_iterations {
        v = lu.solve(&v);
        let s = norm(&v);
        v.iter_mut().for_each(|x| *x /= s);
        let (lambda, av) = rayleigh(&v);
        let res = av
            .iter()
            .zip(&v)
            .map(|(y, x)| (y - lambda * x).norm_sqr())
            .sum::<f64>()
            .sqrt();
        history.push(res);
        if res < residual_tol * (1.0 + lambda.norm()) {
            return Ok((lambda, v, res, it));
        }
        // switch to Rayleigh shifts once the vector has settled
        if res < 1e-6 && refactored < 3 {
            sigma = lambda + Complex64::new(1e-13 * (1.0 + lambda.norm()), 0.0);
            lu = a.shifted(sigma).factor()?;
            refactored += 1;
        }
    }
    Err(Error::NoConvergence {
        what: "shift-invert iteration".into(),
        history,
    })
}

fn resonance_at(
    m: &PotentialModel,
    disc: &Discretization,
    dist: &DistortionProfile,
    phi0: &[f64],
    shift: f64,
    opts: &ResonanceOptions,
) -> Result<(Complex64, Vec<Complex64>, DistortedOperators, f64, usize)> {
    let ops = discretize(m, disc, Some(dist))?;
    let sys = ops.system();
    let mut start = vec![Complex64::new(0.0, 0.0); 2 * disc.n];
    for (i, &p) in phi0.iter().enumerate() {
        start[interleaved(i, 0)] = Complex64::new(p, 0.0);
        start[interleaved(i, 1)] = Complex64::new(1e-3 * p, 0.0);
    }
    let (rho, psi, res, its) = nearest_eigenpair(
        &sys,
        Complex64::new(shift, 0.0),
        &start,
        opts.residual_tol,
        opts.max_iterations,
    )?;
    Ok((rho, psi, ops, res, its))
}

/// Resonance of the coupled system nearest `lambda0` within `window`
/// (a real interval about `lambda0`), with `phi0` the channel-1 state on `disc`.
pub fn resonance(
    m: &PotentialModel,
    disc: &Discretization,
    phi0: &[f64],
    lambda0: f64,
    k_index: i64,
    window: (f64, f64),
    opts: &ResonanceOptions,
) -> Result<ResonanceResult> {
    if phi0.len() != disc.n {
        return Err(Error::Shape(format!(
            "phi0 has {} samples, grid has {}",
            phi0.len(),
            disc.n
        )));
    }
    let (rho0, mut psi, ops, residual, iterations) =
        resonance_at(m, disc, &opts.distortion, phi0, lambda0, opts)?;
    let radius = 0.5 * (window.1 - window.0);
    if (rho0 - Complex64::new(0.5 * (window.0 + window.1), 0.0)).norm() > radius {
        return Err(Error::WindowCount {
            lo: window.0,
            hi: window.1,
            count: 0,
        });
    }
    let varied = DistortionProfile {
        theta: opts.distortion.theta * (1.0 + opts.theta_variation),
        ..opts.distortion
    };
    let (rho_varied, ..) = resonance_at(m, disc, &varied, phi0, lambda0, opts)?;
    if (rho0 - rho_varied).norm() > opts.stability_tol {
        return Err(Error::ThetaInstability {
            first: format!("{rho0}"),
            second: format!("{rho_varied}"),
            diff: (rho0 - rho_varied).norm(),
        });
    }
    let norm = ops.pairing2(&psi, &psi).sqrt();
    psi.iter_mut().for_each(|x| *x /= norm);
    let overlap: Complex64 = phi0
        .iter()
        .enumerate()
        .map(|(i, &p)| psi[interleaved(i, 0)] * p)
        .sum::<Complex64>()
        * disc.dx;
    // fix the sign so that the overlap has positive real part
    if overlap.re < 0.0 {
        psi.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(ResonanceResult {
        rho0,
        psi0: psi,
        b: overlap * overlap,
        k_index,
        rho_varied,
        residual,
        iterations,
    })
}
