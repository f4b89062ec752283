use predissoc_core::cutoff::PlateauBump;
use predissoc_core::dynamics::{
    critical_time_report, filtered_state, survival_amplitude, survival_setup, BoxAmplitude,
    CutoffSpec, ExactAmplitude, SurvivalOptions, SurvivalSetup,
};
use predissoc_core::model::{default_model, GaussianTanh, PotentialModel};
use predissoc_core::spectral::{eigendecompose_box, BoxSpectrum};
use predissoc_core::Complex64;

fn norm(v: &[f64], dx: f64) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() * dx).sqrt()
}

fn box_around(m: &PotentialModel, s: &SurvivalSetup) -> BoxSpectrum {
    let (lo, hi) = s.cutoff.support();
    let pad = 1e-3 * s.h;
    eigendecompose_box(m, &s.ground.ground.disc, Some((lo - pad, hi + pad))).unwrap()
}

#[test]
fn decoupled_amplitude_is_a_pure_phase() {
    let m = default_model().decoupled();
    let h = 0.04;
    let s = survival_setup(&m, h, &SurvivalOptions::default()).unwrap();
    let lambda0 = s.ground.ground.lambda0;
    assert!((s.resonance.rho0 - Complex64::new(lambda0, 0.0)).norm() < 1e-10);
    let eig = box_around(&m, &s);
    let dx = eig.disc.dx;
    let filtered = filtered_state(&s.cutoff, &eig, &s.state).unwrap();
    let diff: Vec<f64> = filtered.iter().zip(&s.state).map(|(a, b)| a - b).collect();
    assert!(norm(&diff, dx) < 1e-10);

    let exact = BoxAmplitude::new(&m, &s.cutoff, &eig, &s.state).unwrap();
    let times: Vec<f64> = (0..=200)
        .map(|k| exact.horizon() * k as f64 / 200.0)
        .collect();
    let trace = survival_amplitude(&exact, &s.predictor, &times).unwrap();
    assert_eq!(trace.times.len(), times.len());
    assert!(trace.correction.iter().all(|c| c.norm() == 0.0));
    assert!(trace.max_residual() <= 1e-10, "{}", trace.max_residual());
    for (&t, a) in trace.times.iter().zip(&trace.amplitude) {
        assert!((a - Complex64::from_polar(1.0, -t * lambda0)).norm() <= 1e-10);
    }
}

#[test]
fn box_route_bounds_and_symmetry() {
    let m = default_model();
    let h = 0.04;
    let s = survival_setup(&m, h, &SurvivalOptions::default()).unwrap();
    let eig = box_around(&m, &s);
    let dx = eig.disc.dx;
    let filtered = filtered_state(&s.cutoff, &eig, &s.state).unwrap();
    let (gphi, phi) = (norm(&filtered, dx), norm(&s.state, dx));
    assert!(gphi <= phi * (1.0 + 1e-12));

    let exact = BoxAmplitude::new(&m, &s.cutoff, &eig, &s.state).unwrap();
    let a0 = exact.amplitude(0.0);
    assert!(a0.im.abs() < 1e-15 && a0.re > 0.0 && a0.re <= 1.0 + 1e-10);
    for k in 0..=100 {
        let t = exact.horizon() * k as f64 / 100.0;
        let a = exact.amplitude(t);
        assert!(a.norm() <= gphi * phi + 1e-12);
        assert!((exact.amplitude(-t) - a.conj()).norm() < 1e-13);
    }
}

#[test]
fn cutoff_away_from_the_spectrum_filters_everything() {
    let m = default_model();
    let h = 0.04;
    let s = survival_setup(&m, h, &SurvivalOptions::default()).unwrap();
    let below = CutoffSpec::new(PlateauBump::new(0.3, 0.6).unwrap(), -5.0, h).unwrap();
    let (lo, hi) = below.support();
    let eig = eigendecompose_box(&m, &s.ground.ground.disc, Some((lo - 0.1, hi + 0.1))).unwrap();
    assert!(eig.energies.is_empty());
    let filtered = filtered_state(&below, &eig, &s.state).unwrap();
    assert!(filtered.iter().all(|v| *v == 0.0));
    // a window that misses part of the support is refused
    let narrow = eigendecompose_box(&m, &s.ground.ground.disc, Some((lo + 0.01, hi))).unwrap();
    assert!(filtered_state(&below, &narrow, &s.state).is_err());
}

#[test]
fn density_route_matches_box_route_on_a_long_box() {
    // the right end at 60 puts the reflection horizon near h t = 60
    let m = GaussianTanh::default().model((-12.0, 60.0));
    let h = 0.04;
    let opts = SurvivalOptions {
        horizon: 20.0,
        ..SurvivalOptions::default()
    };
    let s = survival_setup(&m, h, &opts).unwrap();
    let density = s.density(&m, &opts).unwrap();
    let exact = BoxAmplitude::new(&m, &s.cutoff, &box_around(&m, &s), &s.state).unwrap();
    assert!(exact.horizon() * h > 40.0);
    let worst = (0..=40)
        .map(|k| {
            let t = density.horizon() * k as f64 / 40.0;
            (exact.amplitude(t) - density.amplitude(t)).norm()
        })
        .fold(0.0, f64::max);
    println!(
        "box vs density: {worst:e} over {} levels",
        exact.terms.len()
    );
    assert!(worst < 1e-5);
}

#[test]
fn residual_is_first_order_in_h() {
    let m = default_model();
    let opts = SurvivalOptions::default();
    let mut constants = Vec::new();
    for h in [0.04, 0.02] {
        let s = survival_setup(&m, h, &opts).unwrap();
        let density = s.density(&m, &opts).unwrap();
        let mass = density.mass();
        assert!(mass > 0.0 && mass <= 1.0 + 1e-10);
        let times: Vec<f64> = (0..=400)
            .map(|k| s.t_max(&opts) * k as f64 / 400.0)
            .collect();
        let trace = survival_amplitude(&density, &s.predictor, &times).unwrap();
        assert!(trace.amplitude.iter().all(|a| a.norm() <= 1.0 + 1e-10));
        let c = trace.max_residual() / h;
        let windows: Vec<f64> = [5.0, 10.0, 20.0]
            .iter()
            .map(|&w| trace.weighted_residual(w / h, 2.0 * w / h, 3))
            .collect();
        println!("h={h} C={c} weighted windows {windows:?}");
        assert!(windows[2] <= 3.0 * windows[0], "{windows:?}");
        constants.push(c);
    }
    assert!(constants[1] / constants[0] <= 3.0 && constants[0] / constants[1] <= 3.0);
}

#[test]
fn critical_time_lower_bounds_exceed_the_reference_and_grow() {
    let m = default_model();
    let mut estimates = Vec::new();
    for h in [0.04, 0.02, 0.01] {
        let s = survival_setup(&m, h, &SurvivalOptions::default()).unwrap();
        let times: Vec<f64> = (0..=300).map(|k| 10f64.powf(k as f64 / 75.0) / h).collect();
        let r = critical_time_report(&s.predictor, &times).unwrap();
        println!("h={h} {r:?}");
        assert!(r.estimate() >= 0.8 * r.reference);
        estimates.push(r.estimate());
    }
    assert!(estimates.windows(2).all(|w| w[1] > w[0]));
}
