use crate::error::{Error, Result};
use crate::linalg::power_norm;
use crate::model::PotentialModel;
use crate::wkb::{fundamental_solution, Kind, Side, SideGrid, WkbConfig, WkbSolution};
use num_complex::Complex64;

/// Green kernel of `P_j - z` on one half-line, built from the solution
/// decaying at the far end (`decaying`) and its partner (`other`):
///
/// left:  `[other(x) int_{-inf}^x decaying v + decaying(x) int_x^0 other v] / (h^2 W[other, decaying])`
/// right: `[decaying(x) int_0^x other v + other(x) int_x^inf decaying v] / (h^2 W[decaying, other])`
///
/// with path integrals `dt = J dx` and `W[f, g] = f g_y - f_y g`.
#[derive(Debug, Clone)]
pub struct KernelSpec {
    pub channel: usize,
    pub side: Side,
    pub z: Complex64,
    pub h: f64,
    pub decaying: WkbSolution,
    pub other: WkbSolution,
    pub wronskian: Complex64,
}

/// `int` from the first node to each node by the trapezoid rule.
pub(crate) fn cumulative(f: &[Complex64], dx: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = Complex64::new(0.0, 0.0);
    out.push(acc);
    for w in f.windows(2) {
        acc += (w[0] + w[1]) * (0.5 * dx);
        out.push(acc);
    }
    out
}

/// Transpose of [`cumulative`] as a matrix.
fn cumulative_transpose(g: &[Complex64], dx: f64) -> Vec<Complex64> {
    let n = g.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut suffix = Complex64::new(0.0, 0.0);
    for j in (1..n).rev() {
        out[j] = g[j] * (0.5 * dx) + suffix * dx;
        suffix += g[j];
    }
    if n > 0 {
        out[0] = suffix * (0.5 * dx);
    }
    out
}

/// `int` from each node to the last node, accumulated backwards.
pub(crate) fn tail(f: &[Complex64], dx: f64) -> Vec<Complex64> {
    let n = f.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut acc = Complex64::new(0.0, 0.0);
    for i in (0..n.saturating_sub(1)).rev() {
        acc += (f[i] + f[i + 1]) * (0.5 * dx);
        out[i] = acc;
    }
    out
}

/// Transpose of [`tail`] as a matrix.
fn tail_transpose(g: &[Complex64], dx: f64) -> Vec<Complex64> {
    let n = g.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut prefix = Complex64::new(0.0, 0.0);
    for j in 0..n.saturating_sub(1) {
        out[j] = g[j] * (0.5 * dx) + prefix * dx;
        prefix += g[j];
    }
    if n > 0 {
        out[n - 1] = prefix * (0.5 * dx);
    }
    out
}

fn product(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// Kernel output: values and path derivatives on the kernel grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelOutput {
    pub values: Vec<Complex64>,
    pub slopes: Vec<Complex64>,
}

impl KernelSpec {
    pub fn new(
        m: &PotentialModel,
        h: f64,
        channel: usize,
        side: Side,
        z: Complex64,
        cfg: &WkbConfig,
    ) -> Result<Self> {
        let minus = fundamental_solution(m, h, channel, side, Kind::Minus, z, cfg)?;
        let plus = fundamental_solution(m, h, channel, side, Kind::Plus, z, cfg)?;
        // on the -theta path the incoming channel-2 solution is the decaying one
        let (decaying, other) = if channel == 2 && side == Side::RightMinus {
            (plus, minus)
        } else {
            (minus, plus)
        };
        let o = decaying.grid.origin();
        let w_do = decaying.values[o] * other.slopes[o] - decaying.slopes[o] * other.values[o];
        let wronskian = if side.is_right() { w_do } else { -w_do };
        if wronskian.norm() == 0.0 || !wronskian.is_finite() {
            return Err(Error::Conditioning(format!(
                "vanishing Wronskian for channel {channel} {side:?}"
            )));
        }
        Ok(Self {
            channel,
            side,
            z,
            h,
            decaying,
            other,
            wronskian,
        })
    }

    pub fn grid(&self) -> &SideGrid {
        &self.decaying.grid
    }

    fn factor(&self) -> Complex64 {
        1.0 / (self.h * self.h * self.wronskian)
    }

    /// `v * J` on the grid.
    fn weighted(&self, v: &[Complex64]) -> Vec<Complex64> {
        product(v, &self.grid().jacobian)
    }

    fn check(&self, v: &[Complex64]) -> Result<()> {
        let n = self.grid().len();
        if v.len() != n {
            return Err(Error::Shape(format!(
                "input has {} samples, kernel grid has {n}",
                v.len()
            )));
        }
        Ok(())
    }

    /// `K[v]` with its derivative; `v` must decay at the far end of the grid.
    pub fn apply(&self, v: &[Complex64]) -> Result<KernelOutput> {
        self.check(v)?;
        let n = v.len();
        let scale = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let far: Vec<usize> = if self.side.is_right() {
            (n.saturating_sub(5)..n).collect()
        } else {
            (0..5.min(n)).collect()
        };
        if scale > 0.0 && far.iter().any(|&i| v[i].norm() > 1e-8 * scale.max(1.0)) {
            return Err(Error::InvalidParameter(
                "kernel input does not decay at the far end of the grid".into(),
            ));
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &[Complex64]) -> KernelOutput {
        let dx = self.grid().dx;
        let vj = self.weighted(v);
        let d = &self.decaying;
        let o = &self.other;
        let c = self.factor();
        // `near` integrates against the partner, `far` against the decaying solution
        let (a, b) = if self.side.is_right() {
            (
                cumulative(&product(&o.values, &vj), dx),
                tail(&product(&d.values, &vj), dx),
            )
        } else {
            (
                tail(&product(&o.values, &vj), dx),
                cumulative(&product(&d.values, &vj), dx),
            )
        };
        let values = (0..v.len())
            .map(|i| c * (d.values[i] * a[i] + o.values[i] * b[i]))
            .collect();
        let slopes = (0..v.len())
            .map(|i| c * (d.slopes[i] * a[i] + o.slopes[i] * b[i]))
            .collect();
        KernelOutput { values, slopes }
    }

    /// Adjoint of the discretized kernel (Euclidean, equal node weights).
    pub fn apply_adjoint(&self, w: &[Complex64]) -> Vec<Complex64> {
        let dx = self.grid().dx;
        let d = &self.decaying;
        let o = &self.other;
        let c = self.factor().conj();
        let cd: Vec<Complex64> = d.values.iter().map(|x| x.conj()).collect();
        let co: Vec<Complex64> = o.values.iter().map(|x| x.conj()).collect();
        let gd = product(&cd, w);
        let go = product(&co, w);
        let (a, b) = if self.side.is_right() {
            (cumulative_transpose(&gd, dx), tail_transpose(&go, dx))
        } else {
            (tail_transpose(&gd, dx), cumulative_transpose(&go, dx))
        };
        let jac = &self.grid().jacobian;
        (0..w.len())
            .map(|j| c * jac[j].conj() * (co[j] * a[j] + cd[j] * b[j]))
            .collect()
    }

    /// Largest singular value of the discretized kernel on `L^2` of the half-line.
    pub fn operator_norm(&self, rel_tol: f64, seed: u64) -> Result<f64> {
        let n = self.grid().len();
        power_norm(
            |v| self.apply_unchecked(v).values,
            |w| self.apply_adjoint(w),
            crate::linalg::euclidean_norm,
            n,
            rel_tol,
            500,
            seed,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    #[test]
    fn quadrature_transposes() {
        let n = 17;
        let (f, g) = (random(n, 1), random(n, 2));
        let lhs = dot(&g, &cumulative(&f, 0.3));
        // <g, C f> = sum_j (C^T conj(g))_j f_j
        let gc: Vec<Complex64> = g.iter().map(|x| x.conj()).collect();
        let alt: Complex64 = cumulative_transpose(&gc, 0.3)
            .iter()
            .zip(&f)
            .map(|(a, b)| a * b)
            .sum();
        assert!((lhs - alt).norm() < 1e-12);
        let lt = dot(&g, &tail(&f, 0.3));
        let alt_t: Complex64 = tail_transpose(&gc, 0.3)
            .iter()
            .zip(&f)
            .map(|(a, b)| a * b)
            .sum();
        assert!((lt - alt_t).norm() < 1e-12);
    }

    #[test]
    fn adjoint_is_consistent() {
        let m = crate::model::default_model();
        let z = Complex64::new(0.01, -0.002);
        for &(j, side) in &[
            (1, Side::Left),
            (2, Side::Left),
            (2, Side::RightPlus),
            (2, Side::RightMinus),
            (1, Side::RightPlus),
        ] {
            let k = KernelSpec::new(&m, 0.05, j, side, z, &WkbConfig::default()).unwrap();
            let n = k.grid().len();
            let (v, w) = (random(n, 3), random(n, 4));
            let lhs = dot(&w, &k.apply_unchecked(&v).values);
            let rhs = dot(&k.apply_adjoint(&w), &v);
            assert!(
                (lhs - rhs).norm() < 1e-10 * lhs.norm(),
                "{j} {side:?} {lhs} {rhs}"
            );
        }
    }
}
