use crate::error::{Error, Result};
use crate::roots::brent;
use crate::specfun::{ai, airy, integrate_real, QuadratureSpec};
use serde::{Deserialize, Serialize};

/// `|s|` beyond which the convolution quadrature is refused.
pub const CONVOLUTION_LIMIT: f64 = 20.0;
/// Level below which a decaying Airy factor truncates the integrals.
const TRUNCATION: f64 = 1e-14;

/// Argument beyond which `Ai` stays below the truncation level.
fn decay_edge() -> Result<f64> {
    brent(
        |x| ai(x).map(|v| v.ln() - TRUNCATION.ln()).unwrap_or(f64::NAN),
        5.0,
        30.0,
        1e-10,
    )
}

fn prefactor(tau1: f64, tau2: f64) -> Result<f64> {
    if !(tau1 > 0.0 && tau2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "slopes must be positive, got {tau1}, {tau2}"
        )));
    }
    Ok((tau1 * tau2).powf(-1.0 / 6.0))
}

/// `Ai(-a2 (y + p/tau2)) Ai(a1 (y - q/tau1))` with `a_j = tau_j^{1/3}`.
fn product(y: f64, p: f64, q: f64, tau1: f64, tau2: f64, reflected_bi: bool) -> f64 {
    let left = tau2.cbrt() * (y + p / tau2);
    let right = tau1.cbrt() * (y - q / tau1);
    let (Ok(l), Ok(r)) = (airy(-left), airy(right)) else {
        return f64::NAN;
    };
    let first = if reflected_bi { l.bi } else { l.ai };
    first * r.ai
}

/// Integral of `product` over `[a, b]`, split where either Airy argument vanishes.
fn integral(a: f64, b: f64, p: f64, q: f64, tau1: f64, tau2: f64, bi: bool) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let mut cuts = vec![a, b];
    for c in [-p / tau2, q / tau1] {
        if c > a && c < b {
            cuts.push(c);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let spec = QuadratureSpec::tight();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let v = integrate_real(|y| product(y, p, q, tau1, tau2, bi), w[0], w[1], &spec)?;
        if !v.is_finite() {
            return Err(Error::Integration(format!(
                "Airy product not finite on [{}, {}]",
                w[0], w[1]
            )));
        }
        total += v;
    }
    Ok(total)
}

/// Truncated integration range `[lo, hi]` for the product with shifts `p`, `q`.
fn range(p: f64, q: f64, tau1: f64, tau2: f64) -> Result<(f64, f64)> {
    let x = decay_edge()?;
    Ok((-p / tau2 - x / tau2.cbrt(), q / tau1 + x / tau1.cbrt()))
}

/// `A0(s)` by quadrature of the full-line convolution integral.
pub fn a0_convolution(s: f64, tau1: f64, tau2: f64) -> Result<f64> {
    let c = prefactor(tau1, tau2)?;
    if s.abs() > CONVOLUTION_LIMIT {
        return Err(Error::OutOfRange {
            what: "convolution quadrature needs |s| <= 20; use the closed form",
            value: s,
        });
    }
    let (lo, hi) = range(s, s, tau1, tau2)?;
    Ok(c * integral(lo, hi, s, s, tau1, tau2, false)?)
}

/// `A0(s)` in closed form. Fourier transforming, `Ai_a^(xi) = a^{-1} e^{i xi^3 / (3 a^3)}`,
/// so the convolution of `Ai_a` and `Ai_b` is `(a b)^{-1} g Ai_g` with `g^{-3} = a^{-3} + b^{-3}`.
pub fn a0_closed(s: f64, tau1: f64, tau2: f64) -> Result<f64> {
    let c = prefactor(tau1, tau2)?;
    let sum = tau1 + tau2;
    Ok(c * sum.powf(-1.0 / 3.0) * ai(-(sum / (tau1 * tau2)).powf(2.0 / 3.0) * s)?)
}

/// Half-line Airy overlaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbIntegrals {
    pub a_plus: f64,
    pub a_minus: f64,
    pub b_plus: f64,
}

/// `A^+`, `A^-` (over `y > 0`, `y < 0`) and `B^+` (over `y > 0`, with the
/// reflected `Bi` in place of the reflected `Ai`) at real `rho`, `mu0`.
pub fn ab_integrals(rho: f64, mu0: f64, tau1: f64, tau2: f64) -> Result<AbIntegrals> {
    let c = prefactor(tau1, tau2)?;
    let (lo, hi) = range(rho, mu0, tau1, tau2)?;
    // the reflected Bi only decays through the Ai factor
    let x = decay_edge()?;
    let hi_b = (mu0 / tau1).max(-rho / tau2).max(0.0) + x / tau1.cbrt();
    Ok(AbIntegrals {
        a_plus: c * integral(0.0, hi, rho, mu0, tau1, tau2, false)?,
        a_minus: c * integral(lo, 0.0, rho, mu0, tau1, tau2, false)?,
        b_plus: c * integral(0.0, hi_b, rho, mu0, tau1, tau2, true)?,
    })
}
