use super::kernel::{KernelOutput, KernelSpec};
use crate::error::{Error, Result};
use crate::model::PotentialModel;
use crate::spectral::D1_STENCIL;
use crate::wkb::{Side, SideGrid, WkbConfig, WkbSolution};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Left and right half-line grids glued at the shared node `x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinedGrid {
    pub dx: f64,
    pub xs: Vec<f64>,
    pub path: Vec<Complex64>,
    pub jacobian: Vec<Complex64>,
    /// Index of `x = 0`.
    pub zero: usize,
}

impl JoinedGrid {
    pub fn new(left: &SideGrid, right: &SideGrid) -> Result<Self> {
        if left.side.is_right()
            || !right.side.is_right()
            || (left.dx - right.dx).abs() > 1e-15 * left.dx
        {
            return Err(Error::Shape(
                "joined grid needs a left and a right grid of equal spacing".into(),
            ));
        }
        let zero = left.len() - 1;
        let glue = |a: &[f64], b: &[f64]| a.iter().chain(&b[1..]).copied().collect::<Vec<_>>();
        let gluec =
            |a: &[Complex64], b: &[Complex64]| a.iter().chain(&b[1..]).copied().collect::<Vec<_>>();
        Ok(Self {
            dx: left.dx,
            xs: glue(&left.xs, &right.xs),
            path: gluec(&left.path, &right.path),
            jacobian: gluec(&left.jacobian, &right.jacobian),
            zero,
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Samples of `f` at the path points.
    pub fn sample(&self, f: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
        self.path.iter().map(|&y| f(y)).collect()
    }

    /// Fourth-order path derivative `dv/dy`, second order at the two end nodes.
    pub fn derivative(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = v.len();
        let dx = self.dx;
        (0..n)
            .map(|i| {
                let d = if i >= 2 && i + 2 < n {
                    v[i - 2..=i + 2]
                        .iter()
                        .zip(D1_STENCIL)
                        .map(|(a, w)| a * w)
                        .sum::<Complex64>()
                        / dx
                } else if i == 0 {
                    (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dx)
                } else if i + 1 == n {
                    (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dx)
                } else {
                    (v[i + 1] - v[i - 1]) / (2.0 * dx)
                };
                d / self.jacobian[i]
            })
            .collect()
    }
}

/// Prefactors of the boundary functionals of the resolvent. With `dL`,
/// `oL` the decaying/partner pair on the left and `dR`, `oR` on the right,
///
/// `R phi = K_L[phi_L] + (ll <dL, phi_L> + lr <dR, phi_R>) dL` on the left,
/// `R phi = K_R[phi_R] + (rl <dL, phi_L> + rr <dR, phi_R>) dR` on the right,
///
/// with bilinear pairings along the path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventCoefficients {
    pub ll: Complex64,
    pub lr: Complex64,
    pub rl: Complex64,
    pub rr: Complex64,
}

fn wr(f: &WkbSolution, g: &WkbSolution) -> Complex64 {
    let (i, k) = (f.grid.origin(), g.grid.origin());
    f.values[i] * g.slopes[k] - f.slopes[i] * g.values[k]
}

impl ResolventCoefficients {
    /// Prefactors forced by `C^1` matching at the origin.
    pub fn from_kernels(left: &KernelSpec, right: &KernelSpec) -> Result<Self> {
        let h2 = left.h * left.h;
        let (dl, ol, dr, or) = (&left.decaying, &left.other, &right.decaying, &right.other);
        let w_rl = wr(dr, dl);
        if w_rl.norm() == 0.0 || !w_rl.is_finite() {
            return Err(Error::Conditioning(
                "decaying solutions are linearly dependent at the origin".into(),
            ));
        }
        let common = 1.0 / (h2 * w_rl);
        Ok(Self {
            ll: common * wr(ol, dr) / wr(ol, dl),
            lr: common,
            rl: common,
            rr: common * wr(dl, or) / wr(dr, or),
        })
    }
}

/// Output of the resolvent on a joined grid, with the mismatch of the
/// one-sided limits at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventOutput {
    pub values: Vec<Complex64>,
    pub slopes: Vec<Complex64>,
    pub value_jump: f64,
    pub slope_jump: f64,
}

/// `(P_j - z)^{-1}` assembled from the two half-line kernels.
#[derive(Debug, Clone)]
pub struct Resolvent {
    pub channel: usize,
    pub z: Complex64,
    pub h: f64,
    pub left: KernelSpec,
    pub right: KernelSpec,
    pub coefficients: ResolventCoefficients,
    pub grid: JoinedGrid,
}

/// Distance to an isolated eigenvalue below which the assembly is refused.
pub const EIGENVALUE_GUARD: f64 = 1e-3;

impl Resolvent {
    /// `right` selects the rotated path on the right half-line. `eigenvalue`,
    /// if given, is an eigenvalue that `z` must stay `EIGENVALUE_GUARD * h` away from.
    pub fn new(
        m: &PotentialModel,
        h: f64,
        channel: usize,
        right: Side,
        z: Complex64,
        eigenvalue: Option<f64>,
        cfg: &WkbConfig,
    ) -> Result<Self> {
        if !right.is_right() {
            return Err(Error::InvalidParameter(
                "the right kernel needs a right side".into(),
            ));
        }
        if let Some(e) = eigenvalue {
            let d = (z - e).norm();
            if d < EIGENVALUE_GUARD * h {
                return Err(Error::Conditioning(format!(
                    "z is {d:.3e} from the eigenvalue {e}, below {EIGENVALUE_GUARD}*h"
                )));
            }
        }
        let left = KernelSpec::new(m, h, channel, Side::Left, z, cfg)?;
        let right = KernelSpec::new(m, h, channel, right, z, cfg)?;
        let coefficients = ResolventCoefficients::from_kernels(&left, &right)?;
        let grid = JoinedGrid::new(left.grid(), right.grid())?;
        Ok(Self {
            channel,
            z,
            h,
            left,
            right,
            coefficients,
            grid,
        })
    }

    /// Left and right parts of joined-grid samples; both contain the origin.
    pub fn split<'a>(&self, v: &'a [Complex64]) -> Result<(&'a [Complex64], &'a [Complex64])> {
        if v.len() != self.grid.len() {
            return Err(Error::Shape(format!(
                "input has {} samples, joined grid has {}",
                v.len(),
                self.grid.len()
            )));
        }
        Ok((&v[..=self.grid.zero], &v[self.grid.zero..]))
    }

    /// `R v`; `v` must decay at both ends of the grid.
    pub fn apply(&self, v: &[Complex64]) -> Result<ResolventOutput> {
        let (vl, vr) = self.split(v)?;
        let kl = self.left.apply(vl)?;
        let kr = self.right.apply(vr)?;
        Ok(self.assemble(vl, vr, kl, kr))
    }

    pub(crate) fn apply_unchecked(&self, v: &[Complex64]) -> ResolventOutput {
        let (vl, vr) = (&v[..=self.grid.zero], &v[self.grid.zero..]);
        let kl = self.left.apply_unchecked(vl);
        let kr = self.right.apply_unchecked(vr);
        self.assemble(vl, vr, kl, kr)
    }

    fn assemble(
        &self,
        vl: &[Complex64],
        vr: &[Complex64],
        kl: KernelOutput,
        kr: KernelOutput,
    ) -> ResolventOutput {
        let c = &self.coefficients;
        let (dl, dr) = (&self.left.decaying, &self.right.decaying);
        let il = pairing(&dl.values, vl, &self.left.grid().jacobian, self.grid.dx);
        let ir = pairing(&dr.values, vr, &self.right.grid().jacobian, self.grid.dx);
        let al = c.ll * il + c.lr * ir;
        let ar = c.rl * il + c.rr * ir;
        let mut values: Vec<Complex64> = kl
            .values
            .iter()
            .zip(&dl.values)
            .map(|(k, d)| k + al * d)
            .collect();
        let mut slopes: Vec<Complex64> = kl
            .slopes
            .iter()
            .zip(&dl.slopes)
            .map(|(k, d)| k + al * d)
            .collect();
        let right_v: Vec<Complex64> = kr
            .values
            .iter()
            .zip(&dr.values)
            .map(|(k, d)| k + ar * d)
            .collect();
        let right_s: Vec<Complex64> = kr
            .slopes
            .iter()
            .zip(&dr.slopes)
            .map(|(k, d)| k + ar * d)
            .collect();
        let z0 = self.grid.zero;
        let scale_v = values[z0]
            .norm()
            .max(right_v[0].norm())
            .max(f64::MIN_POSITIVE);
        let scale_s = slopes[z0]
            .norm()
            .max(right_s[0].norm())
            .max(f64::MIN_POSITIVE);
        let value_jump = (values[z0] - right_v[0]).norm() / scale_v;
        let slope_jump = (slopes[z0] - right_s[0]).norm() / scale_s;
        values[z0] = 0.5 * (values[z0] + right_v[0]);
        slopes[z0] = 0.5 * (slopes[z0] + right_s[0]);
        values.extend_from_slice(&right_v[1..]);
        slopes.extend_from_slice(&right_s[1..]);
        ResolventOutput {
            values,
            slopes,
            value_jump,
            slope_jump,
        }
    }

    /// Relative residual `||(P_j - z) y - v|| / ||v||` over interior nodes,
    /// with `y_yy` from a fourth-order difference of the returned slopes.
    pub fn residual(&self, m: &PotentialModel, v: &[Complex64], y: &ResolventOutput) -> f64 {
        let yyy = self.grid.derivative(&y.slopes);
        let n = v.len();
        let (mut num, mut den) = (0.0, 0.0);
        for i in 2..n.saturating_sub(2) {
            let p = m.potential_c(self.channel, self.grid.path[i]);
            let r = -self.h * self.h * yyy[i] + (p - self.z) * y.values[i] - v[i];
            num += r.norm_sqr();
            den += v[i].norm_sqr();
        }
        if den == 0.0 {
            return num.sqrt();
        }
        (num / den).sqrt()
    }
}

/// `int f v dt` along the path by the trapezoid rule.
fn pairing(f: &[Complex64], v: &[Complex64], jac: &[Complex64], dx: f64) -> Complex64 {
    let g: Vec<Complex64> = f
        .iter()
        .zip(v)
        .zip(jac)
        .map(|((a, b), j)| a * b * j)
        .collect();
    match g.len() {
        0 => Complex64::new(0.0, 0.0),
        n => (g.iter().sum::<Complex64>() - 0.5 * (g[0] + g[n - 1])) * dx,
    }
}

/// `M(z) = h^2 R_2(z) W* R_1(z) W` with both resolvents on the same rotated path.
#[derive(Debug, Clone)]
pub struct CouplingOperator {
    pub r1: Resolvent,
    pub r2: Resolvent,
    a0: Vec<Complex64>,
    a1: Vec<Complex64>,
    a1_slope: Vec<Complex64>,
}

impl CouplingOperator {
    pub fn new(
        m: &PotentialModel,
        h: f64,
        right: Side,
        z: Complex64,
        eigenvalue: Option<f64>,
        cfg: &WkbConfig,
    ) -> Result<Self> {
        let r1 = Resolvent::new(m, h, 1, right, z, eigenvalue, cfg)?;
        let r2 = Resolvent::new(m, h, 2, right, z, None, cfg)?;
        if r1.grid != r2.grid {
            return Err(Error::Shape("channel grids differ".into()));
        }
        let g = &r1.grid;
        let a0 = g.sample(|y| m.a0c(y));
        let a1 = g.sample(|y| m.a1c(y));
        let eps = 1e-5;
        let a1_slope = g.sample(|y| (m.a1c(y + eps) - m.a1c(y - eps)) / (2.0 * eps));
        Ok(Self {
            r1,
            r2,
            a0,
            a1,
            a1_slope,
        })
    }

    pub fn grid(&self) -> &JoinedGrid {
        &self.r1.grid
    }

    /// `W v = a0 v + h a1 dv/dy`.
    pub fn coupling(&self, v: &[Complex64], dv: &[Complex64]) -> Vec<Complex64> {
        let h = self.r1.h;
        (0..v.len())
            .map(|i| self.a0[i] * v[i] + h * self.a1[i] * dv[i])
            .collect()
    }

    /// `W* f = a0 f - h (a1 f)'`.
    pub fn coupling_adjoint(&self, f: &[Complex64], df: &[Complex64]) -> Vec<Complex64> {
        let h = self.r1.h;
        (0..f.len())
            .map(|i| self.a0[i] * f[i] - h * (self.a1_slope[i] * f[i] + self.a1[i] * df[i]))
            .collect()
    }

    /// `M v` on the joined grid.
    pub fn apply(&self, v: &[Complex64]) -> Result<ResolventOutput> {
        self.r1.split(v)?;
        let wv = self.coupling(v, &self.grid().derivative(v));
        let f = self.r1.apply(&wv)?;
        let g = self.coupling_adjoint(&f.values, &f.slopes);
        let mut out = self.r2.apply_unchecked(&g);
        let h2 = self.r1.h * self.r1.h;
        out.values
            .iter_mut()
            .chain(out.slopes.iter_mut())
            .for_each(|x| *x *= h2);
        Ok(out)
    }
}
