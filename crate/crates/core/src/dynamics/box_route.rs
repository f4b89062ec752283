use super::cutoff::CutoffSpec;
use super::ExactAmplitude;
use crate::error::{Error, Result};
use crate::model::PotentialModel;
use crate::spectral::BoxSpectrum;
use num_complex::Complex64;

/// `g(H) phi = sum g(E_n) <e_n, phi> e_n` for an interleaved real `phi`.
pub fn filtered_state(spec: &CutoffSpec, eig: &BoxSpectrum, phi: &[f64]) -> Result<Vec<f64>> {
    check(spec, eig, phi)?;
    let mut out = vec![0.0; phi.len()];
    for (k, &e) in eig.energies.iter().enumerate() {
        let g = spec.value(e);
        if g == 0.0 {
            continue;
        }
        let c = g * eig.coefficient(k, phi);
        for (o, v) in out.iter_mut().zip(&eig.vectors[k]) {
            *o += c * v;
        }
    }
    Ok(out)
}

fn check(spec: &CutoffSpec, eig: &BoxSpectrum, phi: &[f64]) -> Result<()> {
    if phi.len() != 2 * eig.disc.n {
        return Err(Error::Shape(format!(
            "state has {} entries, system has {}",
            phi.len(),
            2 * eig.disc.n
        )));
    }
    let (lo, hi) = spec.support();
    if !eig.covers(lo, hi) {
        return Err(Error::InvalidParameter(format!(
            "box spectrum window {:?} misses part of the cutoff support [{lo}, {hi}]",
            eig.window
        )));
    }
    Ok(())
}

/// Time for the fastest wave leaving the crossing at energy `energy_max`
/// to reach the right end of the box and return.
pub fn reflection_horizon(m: &PotentialModel, h: f64, energy_max: f64) -> f64 {
    let (_, hi) = m.domain_box;
    let n = 4000;
    let floor = (0..=n)
        .map(|i| hi * i as f64 / n as f64)
        .flat_map(|x| [m.v1(x), m.v2(x)])
        .fold(f64::INFINITY, f64::min);
    let speed = 2.0 * h * (energy_max - floor).max(0.0).sqrt();
    2.0 * hi / speed
}

/// Spectral sum `sum g(E_n) <e_n, phi>^2 e^{-i t E_n}` on the box.
#[derive(Debug, Clone)]
pub struct BoxAmplitude {
    /// `(E_n, g(E_n) <e_n, phi>^2)` for the levels inside the support.
    pub terms: Vec<(f64, f64)>,
    pub horizon: f64,
}

impl BoxAmplitude {
    pub fn new(
        m: &PotentialModel,
        spec: &CutoffSpec,
        eig: &BoxSpectrum,
        phi: &[f64],
    ) -> Result<Self> {
        check(spec, eig, phi)?;
        let terms = eig
            .energies
            .iter()
            .enumerate()
            .filter_map(|(k, &e)| {
                let g = spec.value(e);
                (g > 0.0).then(|| (e, g * eig.coefficient(k, phi).powi(2)))
            })
            .collect();
        Ok(Self {
            terms,
            horizon: reflection_horizon(m, spec.h, spec.support().1),
        })
    }
}

impl ExactAmplitude for BoxAmplitude {
    fn amplitude(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(e, w)| Complex64::from_polar(w, -t * e))
            .sum()
    }

    fn horizon(&self) -> f64 {
        self.horizon
    }
}
