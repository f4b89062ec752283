use super::cutoff::CutoffSpec;
use super::density::{DensityOptions, SpectralDensity};
use super::trace::Predictor;
use crate::asym::{coupled_ground_state, AsymptoticCoefficients, ContourPath, CoupledGroundState};
use crate::error::Result;
use crate::model::{crossing_data, PotentialModel};
use crate::spectral::{interleaved, resonance, ResonanceOptions, ResonanceResult};
use crate::wkb::default_window;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalOptions {
    pub resonance: ResonanceOptions,
    pub density: DensityOptions,
    /// Contour radius as a fraction of the plateau half-width.
    pub contour_fraction: f64,
    /// Time horizon in units of `1/h`.
    pub horizon: f64,
}

impl Default for SurvivalOptions {
    fn default() -> Self {
        Self {
            resonance: ResonanceOptions::default(),
            density: DensityOptions::default(),
            contour_fraction: 0.5,
            horizon: 40.0,
        }
    }
}

/// Everything the survival comparison needs at one `h`.
#[derive(Debug, Clone)]
pub struct SurvivalSetup {
    pub h: f64,
    pub ground: CoupledGroundState,
    pub resonance: ResonanceResult,
    pub cutoff: CutoffSpec,
    pub predictor: Predictor,
    /// Initial state `(phi0, 0)`, interleaved.
    pub state: Vec<f64>,
}

pub fn survival_setup(m: &PotentialModel, h: f64, opts: &SurvivalOptions) -> Result<SurvivalSetup> {
    let ground = coupled_ground_state(m, h)?;
    let g = &ground.ground;
    let res = resonance(
        m,
        &g.disc,
        &g.phi0,
        g.lambda0,
        g.k_index,
        default_window(m, h)?,
        &opts.resonance,
    )?;
    let cutoff = CutoffSpec::standard(m, g.lambda0, h)?;
    cutoff.validate_levels(m, &g.disc)?;
    let cross = crossing_data(m)?;
    let coeffs = AsymptoticCoefficients {
        tau1: cross.tau1,
        tau2: cross.tau2,
        c0: g.c0,
        a0_at_0: m.a0(0.0),
        lambda0: g.lambda0,
        h,
    };
    let predictor = Predictor {
        rho0: res.rho0,
        b: res.b,
        coeffs,
        path: ContourPath::new(opts.contour_fraction * cutoff.profile.delta0)?,
        profile: cutoff.profile,
        with_correction: true,
    };
    let mut state = vec![0.0; 2 * g.disc.n];
    for (i, &p) in g.phi0.iter().enumerate() {
        state[interleaved(i, 0)] = p;
    }
    Ok(SurvivalSetup {
        h,
        ground,
        resonance: res,
        cutoff,
        predictor,
        state,
    })
}

impl SurvivalSetup {
    /// Largest time of the comparison, `horizon / h`.
    pub fn t_max(&self, opts: &SurvivalOptions) -> f64 {
        opts.horizon / self.h
    }

    /// Spectral-density quadrature of the exact amplitude up to `t_max`.
    pub fn density(&self, m: &PotentialModel, opts: &SurvivalOptions) -> Result<SpectralDensity> {
        SpectralDensity::new(
            m,
            &self.ground.ground.disc,
            &opts.resonance.distortion,
            &self.state,
            &self.cutoff,
            self.resonance.rho0,
            self.t_max(opts),
            &opts.density,
        )
    }
}
