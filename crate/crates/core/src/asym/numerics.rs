use crate::error::{Error, Result};
use crate::green::{JoinedGrid, Resolvent};
use crate::model::PotentialModel;
use crate::spectral::D1_STENCIL;
use crate::wkb::{
    default_window, fundamental_solution, ground_state, GroundStateData, Kind, Side, WkbConfig,
};
use num_complex::Complex64;

/// Ground state of the well channel, signed so that `phi0(0) > 0`, and its
/// image `W* phi0` under the coupling.
#[derive(Debug, Clone)]
pub struct CoupledGroundState {
    pub ground: GroundStateData,
    /// `a0 phi0 - h (a1 phi0)'` on the ground-state grid.
    pub coupled: Vec<f64>,
}

pub fn coupled_ground_state(m: &PotentialModel, h: f64) -> Result<CoupledGroundState> {
    let mut ground = ground_state(m, h, default_window(m, h)?)?;
    if ground.phi0[ground.disc.zero] < 0.0 {
        ground.phi0.iter_mut().for_each(|v| *v = -*v);
    }
    let d = &ground.disc;
    let phi = &ground.phi0;
    let a1phi: Vec<f64> = (0..d.n).map(|i| m.a1(d.x(i)) * phi[i]).collect();
    let coupled = (0..d.n)
        .map(|i| {
            let slope = if i >= 2 && i + 2 < d.n {
                a1phi[i - 2..=i + 2]
                    .iter()
                    .zip(D1_STENCIL)
                    .map(|(a, w)| a * w)
                    .sum::<f64>()
                    / d.dx
            } else {
                0.0
            };
            m.a0(d.x(i)) * phi[i] - h * slope
        })
        .collect();
    Ok(CoupledGroundState { ground, coupled })
}

impl CoupledGroundState {
    /// Samples of `W* phi0` at the nodes `xs`, which must be ground-state grid nodes.
    pub fn sample(&self, xs: &[f64]) -> Result<Vec<Complex64>> {
        let d = &self.ground.disc;
        xs.iter()
            .map(|&x| {
                let i = d.index_near(x);
                if (d.x(i) - x).abs() > 1e-9 * d.dx.max(1.0) {
                    return Err(Error::Shape(format!(
                        "node {x} is not on the ground-state grid"
                    )));
                }
                Ok(Complex64::new(self.coupled[i], 0.0))
            })
            .collect()
    }

    /// `int u phi1 dt` over the nodes of `u`'s half-line.
    pub fn overlap(
        &self,
        m: &PotentialModel,
        channel: usize,
        side: Side,
        kind: Kind,
        z: Complex64,
        cfg: &WkbConfig,
    ) -> Result<Complex64> {
        let u = fundamental_solution(m, self.ground.disc.h, channel, side, kind, z, cfg)?;
        let phi1 = self.sample(&u.grid.xs)?;
        let g: Vec<Complex64> = (0..phi1.len())
            .map(|i| u.values[i] * phi1[i] * u.grid.jacobian[i])
            .collect();
        Ok(trapezoid(&g, u.grid.dx))
    }
}

fn trapezoid(g: &[Complex64], dx: f64) -> Complex64 {
    match g.len() {
        0 => Complex64::new(0.0, 0.0),
        n => (g.iter().sum::<Complex64>() - 0.5 * (g[0] + g[n - 1])) * dx,
    }
}

/// `int f g dt` over the part `[lo, hi]` of a joined grid.
fn pair_on(grid: &JoinedGrid, f: &[Complex64], g: &[Complex64], lo: usize, hi: usize) -> Complex64 {
    let prod: Vec<Complex64> = (lo..=hi).map(|i| f[i] * g[i] * grid.jacobian[i]).collect();
    trapezoid(&prod, grid.dx)
}

/// `T0(z) = <(R2+ - R2-) phi1, phi1>_L + <R2+ phi1, phi1>_{R+} - <R2- phi1, phi1>_{R-}`
/// with `phi1 = W* phi0`, from the kernel-assembled channel-2 resolvents.
pub fn assembled_t0(
    m: &PotentialModel,
    state: &CoupledGroundState,
    z: Complex64,
    cfg: &WkbConfig,
) -> Result<Complex64> {
    let h = state.ground.disc.h;
    let mut total = Complex64::new(0.0, 0.0);
    for (side, sign) in [(Side::RightPlus, 1.0), (Side::RightMinus, -1.0)] {
        let r = Resolvent::new(m, h, 2, side, z, None, cfg)?;
        let phi1 = state.sample(&r.grid.xs)?;
        let y = r.apply(&phi1)?;
        let n = r.grid.len();
        total += sign * pair_on(&r.grid, &y.values, &phi1, 0, r.grid.zero);
        total += sign * pair_on(&r.grid, &y.values, &phi1, r.grid.zero, n - 1);
    }
    Ok(total)
}
