use crate::error::Result;
use crate::linalg::{euclidean_norm, power_norm, BandedLu};
use crate::model::PotentialModel;
use crate::spectral::{discretize, Discretization, DistortedOperators, DistortionProfile};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Factored `P_j^theta - z` on the finite-difference grid, for operator
/// norms of the distorted resolvents and of `M(z) = h^2 R2 W* R1 W`.
pub struct DistortedResolvents {
    pub ops: DistortedOperators,
    pub z: Complex64,
    r1: BandedLu<Complex64>,
    r2: BandedLu<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixNorms {
    pub theta: f64,
    pub resolvent1: f64,
    pub resolvent2: f64,
    pub m_operator: f64,
}

impl DistortedResolvents {
    pub fn new(
        m: &PotentialModel,
        disc: &Discretization,
        dist: &DistortionProfile,
        z: Complex64,
    ) -> Result<Self> {
        let ops = discretize(m, disc, Some(dist))?;
        let r1 = ops.p1.shifted(z).factor()?;
        let r2 = ops.p2.shifted(z).factor()?;
        Ok(Self { ops, z, r1, r2 })
    }

    pub fn resolvent1(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.r1.solve(v)
    }

    pub fn resolvent2(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.r2.solve(v)
    }

    /// `h^2 R2 W* R1 W v` on channel-2 data.
    pub fn m_apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let h = self.ops.h();
        let a = self.r1.solve(&self.ops.w.matvec(v));
        self.r2
            .solve(&self.ops.w_star.matvec(&a))
            .into_iter()
            .map(|x| x * (h * h))
            .collect()
    }

    pub fn m_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        let h = self.ops.h();
        let a = self.r2.solve_adjoint(v);
        let b = self.r1.solve_adjoint(&self.ops.w_star.matvec_adjoint(&a));
        self.ops
            .w
            .matvec_adjoint(&b)
            .into_iter()
            .map(|x| x * (h * h))
            .collect()
    }

    pub fn norms(&self, rel_tol: f64, seed: u64) -> Result<MatrixNorms> {
        let n = self.ops.disc.n;
        let it = 2000;
        let resolvent1 = power_norm(
            |v| self.r1.solve(v),
            |v| self.r1.solve_adjoint(v),
            euclidean_norm,
            n,
            rel_tol,
            it,
            seed,
        )?;
        let resolvent2 = power_norm(
            |v| self.r2.solve(v),
            |v| self.r2.solve_adjoint(v),
            euclidean_norm,
            n,
            rel_tol,
            it,
            seed,
        )?;
        let m_operator = power_norm(
            |v| self.m_apply(v),
            |v| self.m_adjoint(v),
            euclidean_norm,
            n,
            rel_tol,
            it,
            seed,
        )?;
        Ok(MatrixNorms {
            theta: self.ops.distortion.map_or(0.0, |d| d.theta),
            resolvent1,
            resolvent2,
            m_operator,
        })
    }
}
