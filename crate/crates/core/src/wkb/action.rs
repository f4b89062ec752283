use crate::error::{Error, Result};
use crate::model::PotentialModel;
use crate::roots::brent;
use crate::specfun::{integrate_with, QuadratureSpec, Singularity};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionData {
    pub energy: f64,
    pub x_left: f64,
    pub x_right: f64,
    /// `int_{x_left}^{x_right} sqrt(E - V1)`.
    pub action: f64,
    /// `1/2 int dt / sqrt(E - V1)`.
    pub action_derivative: f64,
}

const ROOT_TOL: f64 = 1e-13;

/// Position and value of the minimum of `V1` on the model box.
pub fn well_bottom(m: &PotentialModel) -> (f64, f64) {
    let (lo, hi) = m.domain_box;
    let n = 3000;
    let (mut best_x, mut best_v) = (lo, m.v1(lo));
    for i in 1..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let v = m.v1(x);
        if v < best_v {
            best_x = x;
            best_v = v;
        }
    }
    // golden-section polish
    let step = (hi - lo) / n as f64;
    let (mut a, mut b) = (best_x - step, best_x + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if m.v1(c) < m.v1(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let x = 0.5 * (a + b);
    (x, m.v1(x))
}

/// Turning point of `V_j = E` found by walking from `start` in direction
/// `dir` until the potential exceeds (`above = true`) or drops below `E`.
pub fn turning_point(
    m: &PotentialModel,
    j: usize,
    energy: f64,
    start: f64,
    dir: f64,
    above: bool,
) -> Result<f64> {
    let (lo, hi) = m.domain_box;
    let f = |x: f64| m.potential(j, x) - energy;
    let outside = |x: f64| if above { f(x) > 0.0 } else { f(x) < 0.0 };
    let step = 2e-3 * dir;
    let mut prev = start;
    let mut x = start;
    loop {
        x += step;
        if x < lo || x > hi {
            return Err(Error::EnergyOutsideWell {
                energy,
                reason: format!("no turning point of V{j} from {start} in direction {dir}"),
            });
        }
        if outside(x) {
            return brent(f, prev.min(x), prev.max(x), ROOT_TOL);
        }
        prev = x;
    }
}

fn quad_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-14,
        rel_tol: 1e-13,
        max_subdivisions: 4000,
    }
}

pub fn action(m: &PotentialModel, energy: f64) -> Result<ActionData> {
    let (x_bottom, v_bottom) = well_bottom(m);
    if energy < v_bottom {
        return Err(Error::EnergyOutsideWell {
            energy,
            reason: format!("below the well bottom {v_bottom}"),
        });
    }
    if energy - v_bottom < 1e-14 {
        return Ok(ActionData {
            energy,
            x_left: x_bottom,
            x_right: x_bottom,
            action: 0.0,
            action_derivative: f64::NAN,
        });
    }
    let x_left = turning_point(m, 1, energy, x_bottom, -1.0, true)?;
    let x_right = turning_point(m, 1, energy, x_bottom, 1.0, true)?;
    let gap = |t: f64| (energy - m.v1(t)).max(0.0);
    let spec = quad_spec();
    let action = integrate_with(
        |t| Complex64::new(gap(t).sqrt(), 0.0),
        x_left,
        x_right,
        &spec,
        Singularity::Both,
    )?
    .value
    .re;
    let derivative = integrate_with(
        |t| {
            let g = gap(t);
            Complex64::new(if g > 0.0 { 0.5 / g.sqrt() } else { 0.0 }, 0.0)
        },
        x_left,
        x_right,
        &spec,
        Singularity::Both,
    )?
    .value
    .re;
    Ok(ActionData {
        energy,
        x_left,
        x_right,
        action,
        action_derivative: derivative,
    })
}

/// Index `k` whose quantization value is closest to `energy`.
pub fn nearest_index(m: &PotentialModel, h: f64, energy: f64) -> Result<i64> {
    let a = action(m, 0.0)?;
    let k = ((2.0 * a.action + 2.0 * a.action_derivative * energy) / (std::f64::consts::PI * h)
        - 1.0)
        / 2.0;
    Ok(k.round() as i64)
}

/// `e_k(h) = (-2A(0) + (2k+1) pi h) / (2A'(0))`, accepted only within
/// `+/- c0_window h^{2/3}`.
pub fn bohr_sommerfeld(m: &PotentialModel, h: f64, k: i64, c0_window: f64) -> Result<f64> {
    let a = action(m, 0.0)?;
    let value = (-2.0 * a.action + (2 * k + 1) as f64 * std::f64::consts::PI * h)
        / (2.0 * a.action_derivative);
    let window = c0_window * h.powf(2.0 / 3.0);
    if value.abs() > window {
        return Err(Error::IndexOutOfWindow { k, value, window });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{default_model, PotentialModel};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn harmonic() -> PotentialModel {
        PotentialModel::from_profiles(
            "harmonic",
            Arc::new(|y| y * y),
            Arc::new(|y| -y),
            Arc::new(|_| Complex64::new(0.0, 0.0)),
            Arc::new(|_| Complex64::new(0.0, 0.0)),
            (-5.0, 5.0),
        )
    }

    #[test]
    fn harmonic_action_closed_form() {
        let a = action(&harmonic(), 1.0).unwrap();
        assert!((a.action - PI / 2.0).abs() < 1e-12);
        assert!((a.x_left + 1.0).abs() < 1e-12 && (a.x_right - 1.0).abs() < 1e-12);
        // A(E) = pi E / 2
        assert!((a.action_derivative - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn bottom_energy_has_zero_action() {
        let m = harmonic();
        let (_, v) = well_bottom(&m);
        assert_eq!(action(&m, v).unwrap().action, 0.0);
        assert!(action(&m, v - 0.1).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let m = default_model();
        for &e in &[-0.3, 0.0, 0.2] {
            let a = action(&m, e).unwrap();
            let s = 1e-5;
            let fd =
                (action(&m, e + s).unwrap().action - action(&m, e - s).unwrap().action) / (2.0 * s);
            assert!((fd - a.action_derivative).abs() < 1e-6 * a.action_derivative.abs());
            assert!(a.action > 0.0 && a.x_left < a.x_right);
            assert!((m.v1(a.x_left) - e).abs() < 1e-12 && (m.v1(a.x_right) - e).abs() < 1e-12);
        }
    }

    #[test]
    fn quantization_formula() {
        let m = default_model();
        let h = 0.02;
        let k = nearest_index(&m, h, 0.0).unwrap();
        let e0 = bohr_sommerfeld(&m, h, k, 2.0).unwrap();
        let e1 = bohr_sommerfeld(&m, h, k + 1, 2.0).unwrap();
        let a = action(&m, 0.0).unwrap();
        assert!((e1 - e0 - PI * h / a.action_derivative).abs() < 1e-13);
        assert!(bohr_sommerfeld(&m, h, k + 40, 2.0).is_err());
        // numerator vanishes when 2A(0) = (2k+1) pi h
        let h_exact = 2.0 * a.action / ((2 * k + 1) as f64 * PI);
        assert!(bohr_sommerfeld(&m, h_exact, k, 2.0).unwrap().abs() < 1e-14);
    }
}
