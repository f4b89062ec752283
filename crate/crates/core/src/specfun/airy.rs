//! Real-argument Airy functions.
//!
//! Evaluation zones:
//! * `|x| <= 3`: Maclaurin series, except Ai on `(1.5, 3]`.
//! * Ai on `(1.5, 8]`: Taylor continuation of `y'' = x y` carried backward from
//!   `x = 8`, the direction in which Ai grows. Bi there keeps the all-positive
//!   Maclaurin series.
//! * `[-8, -3)`: both carried outward from `x = -3` by the same continuation.
//! * `|x| > 8`: asymptotic expansions, truncated at the smallest term.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `Ai(0)`.
pub const AI0: f64 = 0.355_028_053_887_817_239_26;
/// `-Ai'(0)`.
pub const AIP0_NEG: f64 = 0.258_819_403_792_806_798_41;

const SERIES_LIMIT: f64 = 3.0;
const ASYMPTOTIC_LIMIT: f64 = 8.0;
const RANGE_LIMIT: f64 = 60.0;
const STEP: f64 = 0.5;
const AI_BACKWARD_FROM: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryValue {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
}

impl AiryValue {
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

pub fn airy(x: f64) -> Result<AiryValue> {
    if !x.is_finite() || x.abs() > RANGE_LIMIT {
        return Err(Error::OutOfRange {
            what: "airy argument must satisfy |x| <= 60",
            value: x,
        });
    }
    let v = if x > AI_BACKWARD_FROM && x <= ASYMPTOTIC_LIMIT {
        let start = asymptotic_positive(ASYMPTOTIC_LIMIT);
        let (ai, ai_prime) = continue_solution(ASYMPTOTIC_LIMIT, start.ai, start.ai_prime, x);
        let series = maclaurin(x);
        AiryValue {
            ai,
            ai_prime,
            bi: series.bi,
            bi_prime: series.bi_prime,
        }
    } else if x.abs() <= SERIES_LIMIT {
        maclaurin(x)
    } else if x > ASYMPTOTIC_LIMIT {
        asymptotic_positive(x)
    } else if x < -ASYMPTOTIC_LIMIT {
        asymptotic_negative(-x)
    } else {
        let start = maclaurin(-SERIES_LIMIT);
        let (ai, ai_prime) = continue_solution(-SERIES_LIMIT, start.ai, start.ai_prime, x);
        let (bi, bi_prime) = continue_solution(-SERIES_LIMIT, start.bi, start.bi_prime, x);
        AiryValue {
            ai,
            ai_prime,
            bi,
            bi_prime,
        }
    };
    if !(v.bi.is_finite() && v.bi_prime.is_finite()) {
        return Err(Error::Overflow { x });
    }
    Ok(v)
}

/// Values at `-s`. The derivative fields are `Ai'(-s)` and `Bi'(-s)`, so
/// `d/ds Ai(-s) = -ai_prime`.
pub fn airy_reflected(s: f64) -> Result<AiryValue> {
    airy(-s)
}

/// `Ai` only, for integrands.
pub fn ai(x: f64) -> Result<f64> {
    airy(x).map(|v| v.ai)
}

pub(crate) fn maclaurin(x: f64) -> AiryValue {
    let x3 = x * x * x;
    // f = sum 3^k (1/3)_k x^{3k}/(3k)!, g = sum 3^k (2/3)_k x^{3k+1}/(3k+1)!
    let (mut f, mut g) = (1.0, x);
    let (mut fp, mut gp) = (0.0, 1.0);
    let (mut tf, mut tg) = (1.0, x);
    let (mut tfp, mut tgp) = (x * x / 2.0, 1.0);
    fp += tfp;
    for k in 1..200 {
        let kf = k as f64;
        tf *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        tg *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        tfp *= x3 / ((3.0 * kf) * (3.0 * kf + 2.0));
        tgp *= x3 / ((3.0 * kf - 2.0) * (3.0 * kf));
        f += tf;
        g += tg;
        fp += tfp;
        gp += tgp;
        let scale = f.abs() + g.abs() + fp.abs() + gp.abs();
        if tf.abs() + tg.abs() + tfp.abs() + tgp.abs() <= 1e-18 * scale {
            break;
        }
    }
    let s3 = 3f64.sqrt();
    AiryValue {
        ai: AI0 * f - AIP0_NEG * g,
        ai_prime: AI0 * fp - AIP0_NEG * gp,
        bi: s3 * (AI0 * f + AIP0_NEG * g),
        bi_prime: s3 * (AI0 * fp + AIP0_NEG * gp),
    }
}

/// Carries a solution of `y'' = x y` from `x0` to `x1` by local Taylor series.
pub(crate) fn continue_solution(x0: f64, y0: f64, dy0: f64, x1: f64) -> (f64, f64) {
    let steps = ((x1 - x0).abs() / STEP).ceil().max(1.0) as usize;
    let dt = (x1 - x0) / steps as f64;
    let (mut x, mut y, mut dy) = (x0, y0, dy0);
    for _ in 0..steps {
        let (ny, ndy) = taylor_step(x, y, dy, dt);
        x += dt;
        y = ny;
        dy = ndy;
    }
    (y, dy)
}

fn taylor_step(x0: f64, y0: f64, dy0: f64, t: f64) -> (f64, f64) {
    // a_{n+2} (n+2)(n+1) = x0 a_n + a_{n-1}
    let mut a = [0.0f64; 64];
    a[0] = y0;
    a[1] = dy0;
    a[2] = x0 * y0 / 2.0;
    let mut n_used = 3;
    for n in 1..61 {
        a[n + 2] = (x0 * a[n] + a[n - 1]) / ((n + 2) as f64 * (n + 1) as f64);
        n_used = n + 3;
        let tail =
            (a[n + 2] * t.powi(n as i32 + 2)).abs() + (a[n + 1] * t.powi(n as i32 + 1)).abs();
        if n > 6 && tail < 1e-19 * (y0.abs() + dy0.abs() * t.abs()).max(1e-300) {
            break;
        }
    }
    let mut y = 0.0;
    let mut dy = 0.0;
    for n in (0..n_used).rev() {
        y = y * t + a[n];
    }
    for n in (1..n_used).rev() {
        dy = dy * t + n as f64 * a[n];
    }
    (y, dy)
}

/// Coefficients `u_k`, `v_k` of the large-argument expansions.
fn asymptotic_coefficients(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0; n];
    let mut v = vec![1.0; n];
    for k in 1..n {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
    }
    (u, v)
}

/// Sums `sum_k sign^k c_k z^-k` (optionally only even or odd k) until the terms
/// stop decreasing.
fn truncated_sum(c: &[f64], zeta: f64, alternate: bool, parity: Option<usize>) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut zk = 1.0;
    for (k, &ck) in c.iter().enumerate() {
        if k > 0 {
            zk /= zeta;
        }
        if let Some(p) = parity {
            if k % 2 != p {
                continue;
            }
        }
        let sign = if alternate {
            let idx = if parity.is_some() { k / 2 } else { k };
            if idx % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            1.0
        };
        let term = sign * ck * zk;
        if term.abs() > last {
            break;
        }
        sum += term;
        last = term.abs();
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn asymptotic_positive(x: f64) -> AiryValue {
    let (u, v) = asymptotic_coefficients(80);
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let q = x.powf(0.25);
    let sp = PI.sqrt();
    let ai_s = truncated_sum(&u, zeta, true, None);
    let aip_s = truncated_sum(&v, zeta, true, None);
    let bi_s = truncated_sum(&u, zeta, false, None);
    let bip_s = truncated_sum(&v, zeta, false, None);
    let em = (-zeta).exp();
    let ep = zeta.exp();
    AiryValue {
        ai: em / (2.0 * sp * q) * ai_s,
        ai_prime: -q * em / (2.0 * sp) * aip_s,
        bi: ep / (sp * q) * bi_s,
        bi_prime: q * ep / sp * bip_s,
    }
}

fn asymptotic_negative(y: f64) -> AiryValue {
    let (u, v) = asymptotic_coefficients(80);
    let zeta = 2.0 / 3.0 * y.powf(1.5);
    let q = y.powf(0.25);
    let sp = PI.sqrt();
    let p = truncated_sum(&u, zeta, true, Some(0));
    let qq = truncated_sum(&u, zeta, true, Some(1));
    let r = truncated_sum(&v, zeta, true, Some(0));
    let s = truncated_sum(&v, zeta, true, Some(1));
    let phase = zeta + PI / 4.0;
    let (sn, cs) = phase.sin_cos();
    AiryValue {
        ai: (sn * p - cs * qq) / (sp * q),
        ai_prime: -q * (cs * r + sn * s) / sp,
        bi: (cs * p + sn * qq) / (sp * q),
        bi_prime: q * (sn * r - cs * s) / sp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn origin_values() {
        let v = airy(0.0).unwrap();
        assert_relative_eq!(v.ai, 0.355_028_053_887_817_239_26, max_relative = 1e-15);
        assert_relative_eq!(
            v.ai_prime,
            -0.258_819_403_792_806_798_41,
            max_relative = 1e-15
        );
    }

    #[test]
    fn wronskian_across_zones() {
        for i in -600..=600 {
            let x = i as f64 * 0.05;
            let w = airy(x).unwrap().wronskian();
            assert!((w * PI - 1.0).abs() < 1e-10, "x={x} w*pi={}", w * PI);
        }
    }

    #[test]
    fn zone_boundaries_agree() {
        // series and continuation overlap just past the series zone
        for &x in &[-3.5, -4.0, 1.6, 2.0] {
            let a = maclaurin(x);
            let c = airy(x).unwrap();
            assert_relative_eq!(a.ai, c.ai, max_relative = 1e-11);
            assert_relative_eq!(a.bi, c.bi, max_relative = 1e-11);
            assert_relative_eq!(a.ai_prime, c.ai_prime, max_relative = 1e-11);
        }
        let outer = asymptotic_negative(ASYMPTOTIC_LIMIT);
        let stepped = airy(-ASYMPTOTIC_LIMIT).unwrap();
        assert_relative_eq!(outer.ai, stepped.ai, max_relative = 1e-11);
        assert_relative_eq!(outer.bi_prime, stepped.bi_prime, max_relative = 1e-11);
        let outer = asymptotic_positive(ASYMPTOTIC_LIMIT);
        let series = maclaurin(ASYMPTOTIC_LIMIT);
        assert_relative_eq!(outer.bi, series.bi, max_relative = 1e-11);
    }

    #[test]
    fn ode_residual() {
        for i in -27..=27 {
            let x = i as f64 * 0.37;
            let d = 1e-5;
            let f = |x: f64| airy(x).unwrap().ai;
            let second = (f(x + d) - 2.0 * f(x) + f(x - d)) / (d * d);
            let res = second - x * f(x);
            assert!(
                res.abs() <= 1e-5 * (1.0 + (x * f(x)).abs()),
                "x={x} res={res}"
            );
        }
    }

    #[test]
    fn large_argument_envelope() {
        for &x in &[8.0, 10.0, 20.0, 40.0] {
            let v = airy(x).unwrap();
            let r = v.ai * 2.0 * PI.sqrt() * x.powf(0.25) * (2.0 / 3.0 * x.powf(1.5)).exp();
            assert!((0.99..=1.01).contains(&r));
        }
    }

    #[test]
    fn monotone_on_positive_axis() {
        let mut prev = airy(0.0).unwrap();
        for i in 1..300 {
            let v = airy(i as f64 * 0.1).unwrap();
            assert!(v.ai > 0.0 && v.ai < prev.ai);
            assert!(v.bi > prev.bi);
            prev = v;
        }
    }

    #[test]
    fn reflection() {
        assert_eq!(airy_reflected(0.0).unwrap(), airy(0.0).unwrap());
        assert_eq!(airy_reflected(2.0).unwrap().ai, airy(-2.0).unwrap().ai);
        assert_eq!(airy_reflected(-3.0).unwrap().ai, airy(3.0).unwrap().ai);
    }

    #[test]
    fn range_guard() {
        assert!(matches!(airy(61.0), Err(Error::OutOfRange { .. })));
        assert!(airy(f64::NAN).is_err());
    }
}
