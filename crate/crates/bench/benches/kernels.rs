use criterion::{black_box, criterion_group, criterion_main, Criterion};
use predissoc_core::asym::{a0_closed, a0_convolution, f_contour, ContourPath};
use predissoc_core::cutoff::PlateauBump;
use predissoc_core::model::default_model;
use predissoc_core::specfun::airy;
use predissoc_core::spectral::{discretize, Discretization, DistortionProfile};
use predissoc_core::wkb::{default_window, ground_state};
use predissoc_core::Complex64;

fn special_functions(c: &mut Criterion) {
    c.bench_function("airy on [-20, 20]", |b| {
        b.iter(|| {
            (0..=400)
                .map(|i| airy(black_box(-20.0 + 0.1 * i as f64)).unwrap().ai)
                .sum::<f64>()
        })
    });
    c.bench_function("a0 convolution", |b| {
        b.iter(|| a0_convolution(black_box(-2.0), 1.0, 2.0).unwrap())
    });
    c.bench_function("a0 closed form", |b| {
        b.iter(|| a0_closed(black_box(-2.0), 1.0, 2.0).unwrap())
    });
    let profile = PlateauBump::new(0.5, 1.0).unwrap();
    let path = ContourPath::new(0.5).unwrap();
    c.bench_function("contour function", |b| {
        b.iter(|| f_contour(black_box(20.0), &path, &profile).unwrap())
    });
}

fn linear_algebra(c: &mut Criterion) {
    let m = default_model();
    let disc = Discretization::new(&m, 0.04, 1.0).unwrap();
    let ops = discretize(&m, &disc, Some(&DistortionProfile::default())).unwrap();
    let system = ops.system();
    let rhs = vec![Complex64::new(1.0, 0.0); system.n()];
    let mut group = c.benchmark_group("scaled resolvent at h = 0.04");
    group.sample_size(20);
    group.bench_function("factor and solve", |b| {
        b.iter(|| {
            system
                .shifted(Complex64::new(-0.03, 0.0))
                .factor()
                .unwrap()
                .solve(black_box(&rhs))
        })
    });
    group.finish();

    let mut group = c.benchmark_group("ground state");
    group.sample_size(10);
    group.bench_function("h = 0.04", |b| {
        b.iter(|| ground_state(&m, 0.04, default_window(&m, 0.04).unwrap()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, special_functions, linear_algebra);
criterion_main!(benches);
