use super::distortion::DistortionProfile;
use super::grid::{Discretization, D1_STENCIL, D2_STENCIL};
use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::model::PotentialModel;
use num_complex::Complex64;

/// Banded finite-difference realizations of `P1`, `P2`, `W`, `W*` (and `H`)
/// under an optional exterior complex scaling, with Dirichlet ends.
#[derive(Debug, Clone)]
pub struct DistortedOperators {
    pub disc: Discretization,
    pub distortion: Option<DistortionProfile>,
    pub p1: BandMatrix<Complex64>,
    pub p2: BandMatrix<Complex64>,
    pub w: BandMatrix<Complex64>,
    pub w_star: BandMatrix<Complex64>,
    /// `J(x_i)`, the path Jacobian at each node.
    pub jacobian: Vec<Complex64>,
}

pub fn discretize(
    m: &PotentialModel,
    disc: &Discretization,
    distortion: Option<&DistortionProfile>,
) -> Result<DistortedOperators> {
    if let Some(d) = distortion {
        if d.theta.abs() > 0.35 {
            return Err(Error::InvalidParameter(format!(
                "|theta| = {} exceeds 0.35",
                d.theta.abs()
            )));
        }
        if d.ramp < 20.0 * disc.dx {
            return Err(Error::Resolution {
                spacing: disc.dx,
                required: d.ramp / 20.0,
                required_n: ((disc.x_max() - disc.x_min) / (d.ramp / 20.0)).ceil() as usize,
            });
        }
    }
    let n = disc.n;
    let h = disc.h;
    let dx = disc.dx;
    let one = Complex64::new(1.0, 0.0);
    let mut p1 = BandMatrix::zeros(n, 2, 2);
    let mut p2 = BandMatrix::zeros(n, 2, 2);
    let mut w = BandMatrix::zeros(n, 2, 2);
    let mut w_star = BandMatrix::zeros(n, 2, 2);
    let mut jacobian = Vec::with_capacity(n);
    let path = |x: f64| distortion.map_or(Complex64::new(x, 0.0), |d| d.path(x));
    let a1_nodes: Vec<Complex64> = (0..n).map(|i| m.a1c(path(disc.x(i)))).collect();
    for i in 0..n {
        let x = disc.x(i);
        let (y, jac, djac) = match distortion {
            Some(d) => (d.path(x), d.jacobian(x), d.jacobian_slope(x)),
            None => (Complex64::new(x, 0.0), one, Complex64::new(0.0, 0.0)),
        };
        jacobian.push(jac);
        let inv_j = one / jac;
        let c2 = -h * h * inv_j * inv_j / (dx * dx);
        let c1 = h * h * djac * inv_j * inv_j * inv_j / dx;
        let a1 = a1_nodes[i];
        for (k, off) in (-2i64..=2).enumerate() {
            let j = i as i64 + off;
            if j < 0 || j >= n as i64 {
                continue;
            }
            let j = j as usize;
            let kinetic = c2 * D2_STENCIL[k] + c1 * D1_STENCIL[k];
            p1.add(i, j, kinetic);
            p2.add(i, j, kinetic);
            w.add(i, j, h * a1 * inv_j * D1_STENCIL[k] / dx);
            w_star.add(i, j, -h * inv_j * D1_STENCIL[k] * a1_nodes[j] / dx);
        }
        p1.add(i, i, m.v1c(y));
        p2.add(i, i, m.v2c(y));
        let a0 = m.a0c(y);
        w.add(i, i, a0);
        w_star.add(i, i, a0);
    }
    Ok(DistortedOperators {
        disc: *disc,
        distortion: distortion.copied(),
        p1,
        p2,
        w,
        w_star,
        jacobian,
    })
}

/// Interleaved index of component `c` (0 or 1) at node `i`.
pub fn interleaved(i: usize, c: usize) -> usize {
    2 * i + c
}

pub fn interleave(u1: &[Complex64], u2: &[Complex64]) -> Vec<Complex64> {
    u1.iter().zip(u2).flat_map(|(a, b)| [*a, *b]).collect()
}

pub fn split(v: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    (
        v.iter().step_by(2).copied().collect(),
        v.iter().skip(1).step_by(2).copied().collect(),
    )
}

impl DistortedOperators {
    pub fn h(&self) -> f64 {
        self.disc.h
    }

    /// The 2x2 system `[[P1, hW], [hW*, P2]]` with interleaved unknowns
    /// (bandwidth 5).
    pub fn system(&self) -> BandMatrix<Complex64> {
        let n = self.disc.n;
        let h = self.disc.h;
        let mut hm = BandMatrix::zeros(2 * n, 5, 5);
        for i in 0..n {
            for j in i.saturating_sub(2)..(i + 3).min(n) {
                hm.add(interleaved(i, 0), interleaved(j, 0), self.p1.get(i, j));
                hm.add(interleaved(i, 1), interleaved(j, 1), self.p2.get(i, j));
                hm.add(interleaved(i, 0), interleaved(j, 1), self.w.get(i, j) * h);
                hm.add(
                    interleaved(i, 1),
                    interleaved(j, 0),
                    self.w_star.get(i, j) * h,
                );
            }
        }
        hm
    }

    /// Bilinear pairing `sum u v J dx` (the distorted substitute for `<u, conj v>`).
    pub fn pairing(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        u.iter()
            .zip(v)
            .zip(&self.jacobian)
            .map(|((a, b), j)| a * b * j)
            .sum::<Complex64>()
            * self.disc.dx
    }

    /// Interleaved pairing for two-component vectors.
    pub fn pairing2(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        u.chunks(2)
            .zip(v.chunks(2))
            .zip(&self.jacobian)
            .map(|((a, b), j)| (a[0] * b[0] + a[1] * b[1]) * j)
            .sum::<Complex64>()
            * self.disc.dx
    }
}

pub fn l2_norm(v: &[Complex64], dx: f64) -> f64 {
    (v.iter().map(|x| x.norm_sqr()).sum::<f64>() * dx).sqrt()
}
