use predissoc_core::green::{contour_probe, norm_fits, norm_row, KernelSpec, NormOptions};
use predissoc_core::model::default_model;
use predissoc_core::wkb::{action, default_window, ground_state, Side, WkbConfig};
use predissoc_core::Complex64;
use std::f64::consts::PI;

fn probe(h: f64) -> Complex64 {
    let m = default_model();
    let g = ground_state(&m, h, default_window(&m, h).unwrap()).unwrap();
    let d0 = 0.3 * PI / action(&m, 0.0).unwrap().action_derivative;
    contour_probe(g.lambda0, d0, h)
}

#[test]
fn zero_kernel_input_has_zero_image() {
    let m = default_model();
    let k = KernelSpec::new(&m, 0.04, 2, Side::Left, probe(0.04), &WkbConfig::default()).unwrap();
    let out = k
        .apply(&vec![Complex64::new(0.0, 0.0); k.grid().len()])
        .unwrap();
    assert!(out.values.iter().all(|v| v.norm() == 0.0));
}

#[test]
fn non_decaying_input_is_refused() {
    let m = default_model();
    let k = KernelSpec::new(&m, 0.04, 2, Side::Left, probe(0.04), &WkbConfig::default()).unwrap();
    assert!(k
        .apply(&vec![Complex64::new(1.0, 0.0); k.grid().len()])
        .is_err());
}

#[test]
fn norm_scalings_over_sweep() {
    let m = default_model();
    let opts = NormOptions::default();
    let rows: Vec<_> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&h| norm_row(&m, h, probe(h), &opts).unwrap())
        .collect();
    for r in &rows {
        println!("{r:?}");
        assert!(r.m_plus < 1.0 && r.m_minus < 1.0);
    }
    let fits = norm_fits(&rows).unwrap();
    for f in &fits {
        println!(
            "{} slope {:.4} r2 {:.4} pass {}",
            f.quantity,
            f.slope,
            f.r_squared,
            f.passed()
        );
    }
    let passed = |name: &str| fits.iter().find(|f| f.quantity == name).unwrap().passed();
    assert!(passed("k2_left") && passed("k1_left") && passed("m_plus") && passed("m_minus"));
    // the channel-2 resolvent grows like 1/h on this model
    for f in fits.iter().filter(|f| f.quantity.starts_with("r2")) {
        assert!((f.slope + 1.0).abs() < 0.1, "{f:?}");
    }
}
