//! Adaptive Gauss-Kronrod (7/15) quadrature for complex-valued integrands.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0 && max_subdivisions >= 1) {
            return Err(Error::InvalidParameter(format!(
                "quadrature spec needs positive tolerances and >= 1 subdivision (got {abs_tol}, {rel_tol}, {max_subdivisions})"
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    pub fn tight() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_subdivisions: 4000,
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

/// Integrable `1/sqrt` endpoint behaviour declared by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Singularity {
    #[default]
    None,
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn kronrod<F: Fn(f64) -> Complex64 + ?Sized>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = r * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * r, ((k - g) * r).norm())
}

struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn adapt<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let (v, e) = kronrod(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        a,
        b,
        value: v,
        error: e,
    });
    let mut total = v;
    let mut err = e;
    let mut count = 1;
    while err > spec.abs_tol.max(spec.rel_tol * total.norm()) {
        if count >= spec.max_subdivisions {
            let worst = heap.peek().expect("non-empty heap");
            return Err(Error::Quadrature {
                subdivisions: count,
                worst_a: worst.a,
                worst_b: worst.b,
                worst_error: worst.error,
            });
        }
        let p = heap.pop().expect("non-empty heap");
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = kronrod(f, p.a, m);
        let (v2, e2) = kronrod(f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Piece {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Piece {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
        });
        count += 1;
        if count % 64 == 0 {
            // refresh running sums against drift
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(QuadResult {
        value: total,
        error: err,
        intervals: count,
    })
}

/// Integral of `f` over `[a, b]`; `a > b` flips the sign, `a == b` gives zero.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    integrate_with(f, a, b, spec, Singularity::None).map(|r| r.value)
}

pub fn integrate_real<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    integrate(|x| Complex64::new(f(x), 0.0), a, b, spec).map(|v| v.re)
}

pub fn integrate_with<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    singularity: Singularity,
) -> Result<QuadResult> {
    integrate_dyn(&f, a, b, spec, singularity)
}

fn integrate_dyn(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    singularity: Singularity,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "non-finite limits [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            intervals: 0,
        });
    }
    if a > b {
        let flipped = match singularity {
            Singularity::Left => Singularity::Right,
            Singularity::Right => Singularity::Left,
            s => s,
        };
        return integrate_dyn(f, b, a, spec, flipped).map(|r| QuadResult {
            value: -r.value,
            ..r
        });
    }
    match singularity {
        Singularity::None => adapt(f, a, b, spec),
        Singularity::Left => {
            // x = a + s^2
            let g = |s: f64| f(a + s * s) * (2.0 * s);
            adapt(&g, 0.0, (b - a).sqrt(), spec)
        }
        Singularity::Right => {
            let g = |s: f64| f(b - s * s) * (2.0 * s);
            adapt(&g, 0.0, (b - a).sqrt(), spec)
        }
        Singularity::Both => {
            let m = 0.5 * (a + b);
            let half = QuadratureSpec {
                abs_tol: 0.5 * spec.abs_tol,
                ..*spec
            };
            let l = integrate_dyn(f, a, m, &half, Singularity::Left)?;
            let r = integrate_dyn(f, m, b, &half, Singularity::Right)?;
            Ok(QuadResult {
                value: l.value + r.value,
                error: l.error + r.error,
                intervals: l.intervals + r.intervals,
            })
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn zero_integrand() {
        let v = integrate(
            |_| Complex64::new(0.0, 0.0),
            0.0,
            1.0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_eq!(v.norm(), 0.0);
    }

    #[test]
    fn semicircle_area() {
        let spec = QuadratureSpec::tight();
        let r = integrate_with(
            |x| Complex64::new((1.0 - x * x).max(0.0).sqrt(), 0.0),
            -1.0,
            1.0,
            &spec,
            Singularity::Both,
        )
        .unwrap();
        assert_relative_eq!(r.value.re, PI / 2.0, max_relative = 1e-12);
        assert!(r.error <= spec.abs_tol.max(spec.rel_tol * r.value.norm()));
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        let r = integrate_with(
            |x| Complex64::new(1.0 / x.sqrt(), 0.0),
            0.0,
            4.0,
            &QuadratureSpec::tight(),
            Singularity::Left,
        )
        .unwrap();
        assert_relative_eq!(r.value.re, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn reversed_limits() {
        let s = QuadratureSpec::default();
        let a = integrate_real(|x| x * x, 0.0, 2.0, &s).unwrap();
        let b = integrate_real(|x| x * x, 2.0, 0.0, &s).unwrap();
        assert_relative_eq!(a, -b);
        assert_relative_eq!(a, 8.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn reports_worst_interval() {
        let spec = QuadratureSpec::new(1e-15, 1e-15, 3).unwrap();
        let err = integrate(
            |x| Complex64::new((50.0 * x).sin() / x.max(1e-3), 0.0),
            0.0,
            10.0,
            &spec,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::Quadrature {
                subdivisions: 3,
                ..
            }
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(0.0, 1e-3, 5).is_err());
        assert!(QuadratureSpec::new(1e-3, 1e-3, 0).is_err());
    }

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(12);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(22)).sum();
        assert_relative_eq!(s, 2.0 / 23.0, max_relative = 1e-13);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
    }
}
