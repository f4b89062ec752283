use predissoc_core::fit::{fit_slope, Expectation};
use predissoc_core::model::{crossing_data, default_model};
use predissoc_core::roots::brent;
use predissoc_core::spectral::Discretization;
use predissoc_core::wkb::{
    bohr_sommerfeld, default_window, fundamental_solution, ground_state, ground_state_on,
    inner_turning_point, Kind, LangerMap, Side, WkbConfig,
};
use predissoc_core::Complex64;

/// Matching defect at `x = 0` of the two decaying channel-1 solutions.
fn shooting_defect(h: f64, e: f64) -> f64 {
    let m = default_model();
    let cfg = WkbConfig {
        refine: 4.0,
        substeps: 4,
        ..WkbConfig::default()
    };
    let z = Complex64::new(e, 0.0);
    let l = fundamental_solution(&m, h, 1, Side::Left, Kind::Minus, z, &cfg).unwrap();
    let r = fundamental_solution(&m, h, 1, Side::RightPlus, Kind::Minus, z, &cfg).unwrap();
    let (a, b) = (l.grid.origin(), r.grid.origin());
    (l.values[a] * r.slopes[b] - l.slopes[a] * r.values[b]).re
}

#[test]
fn shooting_and_matrix_eigenvalues_agree() {
    let m = default_model();
    let h = 0.05;
    let window = default_window(&m, h).unwrap();
    let disc = Discretization::new(&m, h, 4.0).unwrap();
    let fd = ground_state_on(&m, &disc, window).unwrap();
    let shoot = brent(
        |e| shooting_defect(h, e),
        fd.lambda0 - 1e-4,
        fd.lambda0 + 1e-4,
        1e-14,
    )
    .unwrap();
    println!(
        "fd {} shooting {} diff {:e}",
        fd.lambda0,
        shoot,
        fd.lambda0 - shoot
    );
    assert!((fd.lambda0 - shoot).abs() < 1e-8);
}

#[test]
fn bohr_sommerfeld_error_is_second_order() {
    let m = default_model();
    let mut pairs = Vec::new();
    for &h in &[0.04, 0.02, 0.01] {
        let g = ground_state(&m, h, default_window(&m, h).unwrap()).unwrap();
        let e = bohr_sommerfeld(&m, h, g.k_index, 2.0).unwrap();
        println!(
            "h={h} k={} lambda0={} e_k={} c0^2={} ref={}",
            g.k_index,
            g.lambda0,
            e,
            g.c0 * g.c0,
            g.c0_sq_reciprocal()
        );
        pairs.push((h, (g.lambda0 - e).abs()));
    }
    let fit = fit_slope("|lambda0 - e_k|", &pairs)
        .unwrap()
        .expect(Expectation::Within {
            target: 2.0,
            tolerance: 0.3,
        });
    println!("{fit:?}");
    assert!(fit.passed());
}

#[test]
fn langer_variable_scaling_near_crossing() {
    let m = default_model();
    let tau1 = crossing_data(&m).unwrap().tau1;
    let (mu, y) = (0.5, 1.0);
    let mut pairs = Vec::new();
    for &h in &[0.04f64, 0.02, 0.01, 0.005] {
        let s = h.powf(2.0 / 3.0);
        let e = mu * s;
        let map = LangerMap::new(&m, 1, e, inner_turning_point(&m, 1, e).unwrap());
        let xi = map.eval(&m, s * y).unwrap().xi;
        let gap = (xi / s - tau1.cbrt() * (y - mu / tau1)).abs();
        pairs.push((s, gap));
    }
    let fit = fit_slope("langer", &pairs).unwrap();
    println!("{fit:?}");
    assert!(fit.slope >= 0.5);
}
