use predissoc_core::green::{envelope_check, EnvelopeReport, EnvelopeSpec, Space};
use predissoc_core::model::default_model;
use predissoc_core::wkb::{
    action, default_window, fundamental_solution, ground_state, outer_turning_point, Kind, Side,
    WkbConfig,
};
use predissoc_core::Complex64;
use std::f64::consts::PI;

fn report(h: f64, j: usize, side: Side, kind: Kind, space: Space) -> EnvelopeReport {
    let m = default_model();
    let g = ground_state(&m, h, default_window(&m, h).unwrap()).unwrap();
    let d0 = 0.3 * PI / action(&m, 0.0).unwrap().action_derivative;
    let z = Complex64::new(g.lambda0, -0.5 * d0 * h);
    let spec = EnvelopeSpec {
        h,
        x_star: outer_turning_point(&m, z.re).unwrap(),
        delta: 0.5,
        right_cut: 4.0,
    };
    let u = fundamental_solution(&m, h, j, side, kind, z, &WkbConfig::default()).unwrap();
    let v: Vec<Complex64> = u.values.iter().map(|x| x * h.powf(-1.0 / 6.0)).collect();
    envelope_check(&u.grid.xs, &v, space, side, &spec)
}

fn assert_uniform(j: usize, side: Side, kind: Kind, space: Space) {
    let reports: Vec<EnvelopeReport> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&h| report(h, j, side, kind, space))
        .collect();
    for r in &reports {
        assert!(r.passed(2.0), "{r:?}");
    }
    let constants: Vec<f64> = reports.iter().map(|r| r.max_constant()).collect();
    let (lo, hi) = constants
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
    assert!(hi / lo < 1.5, "{constants:?}");
    // decay rates stay away from zero across the sweep
    for r in &reports {
        for c in r.clauses.iter().filter(|c| c.samples > 0) {
            if let Some(rate) = c.rate {
                assert!(rate > 0.05, "{} rate {rate}", c.name);
            }
        }
    }
}

#[test]
fn well_solution_in_scaled_f1_left() {
    assert_uniform(1, Side::Left, Kind::Minus, Space::F1);
}

#[test]
fn dissociative_solution_in_scaled_f2_left() {
    assert_uniform(2, Side::Left, Kind::Minus, Space::F2);
}

#[test]
fn right_solutions_in_their_spaces() {
    assert_uniform(1, Side::RightPlus, Kind::Minus, Space::F1);
    assert_uniform(2, Side::RightPlus, Kind::Minus, Space::F2);
    assert_uniform(2, Side::RightMinus, Kind::Plus, Space::F2);
}
