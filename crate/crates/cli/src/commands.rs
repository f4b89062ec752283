use crate::output::{describe, Check, Plot, Run, Table};
use anyhow::{bail, Context, Result};
use predissoc_core::asym::{
    a0_closed, a0_convolution, ab_integrals, coupled_ground_state, f_contour, ContourPath,
};
use predissoc_core::cutoff::PlateauBump;
use predissoc_core::dynamics::{
    critical_time_report, survival_amplitude, survival_setup, BoxAmplitude, ExactAmplitude,
    SurvivalOptions, DEFAULT_PLATEAU_FRACTION, DEFAULT_SUPPORT_FRACTION,
};
use predissoc_core::fit::{fit_slope, Expectation, SlopeFit};
use predissoc_core::green::{contour_probe, norm_fits, norm_row, NormOptions};
use predissoc_core::model::{crossing_data, validate_assumptions, PotentialModel};
use predissoc_core::spectral::{eigendecompose_box, DistortionProfile};
use predissoc_core::wkb::{
    action, bohr_sommerfeld, default_window, ground_state, Kind, Side, WkbConfig,
};
use predissoc_core::Complex64;
use std::f64::consts::PI;
use std::path::Path;

/// Fails with the first violated assumption clause.
fn require_assumptions(m: &PotentialModel) -> Result<()> {
    if let Some(c) = validate_assumptions(m).first_failure() {
        bail!("model assumption '{}' fails: {}", c.name, c.detail);
    }
    Ok(())
}

fn distortion(run: &Run) -> DistortionProfile {
    DistortionProfile {
        theta: run.cfg.theta,
        ..DistortionProfile::default()
    }
}

fn survival_options(run: &Run) -> SurvivalOptions {
    let mut opts = SurvivalOptions {
        horizon: run.cfg.horizon,
        ..SurvivalOptions::default()
    };
    opts.resonance.distortion = distortion(run);
    opts
}

fn wkb_config(run: &Run) -> WkbConfig {
    WkbConfig {
        distortion: distortion(run),
        ..WkbConfig::default()
    }
}

/// Plateau and support half-widths of the energy cutoff.
fn cutoff_widths(m: &PotentialModel) -> Result<(f64, f64)> {
    let spacing = PI / action(m, 0.0)?.action_derivative;
    Ok((
        DEFAULT_PLATEAU_FRACTION * spacing,
        DEFAULT_SUPPORT_FRACTION * spacing,
    ))
}

fn fit_check(criterion: u32, fits: Vec<SlopeFit>, extra: bool, note: String) -> Check {
    let mut parts: Vec<String> = fits.iter().map(describe).collect();
    if !note.is_empty() {
        parts.push(note);
    }
    Check {
        criterion,
        passed: extra && fits.iter().all(SlopeFit::passed),
        summary: parts.join("; "),
        fits,
    }
}

fn file_tag(h: f64) -> String {
    format!("{h}").replace('.', "p")
}

pub fn validate_model(run: &mut Run) -> Result<()> {
    let report = validate_assumptions(&run.model);
    let rows: Vec<Vec<String>> = report
        .clauses
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.passed.to_string(),
                c.witness.map(|w| format!("{w:.12e}")).unwrap_or_default(),
                c.detail.clone(),
            ]
        })
        .collect();
    run.write_records(
        "assumptions.csv",
        &["clause", "passed", "witness", "detail"],
        &rows,
    )?;
    let failed: Vec<&str> = report
        .clauses
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    run.record(
        "assumptions",
        Check {
            criterion: 0,
            passed: failed.is_empty(),
            summary: if failed.is_empty() {
                format!(
                    "{} clauses hold; {}",
                    report.clauses.len(),
                    report.holomorphy
                )
            } else {
                format!("failing: {}", failed.join(", "))
            },
            fits: Vec::new(),
        },
    );
    if let Some(c) = report.first_failure() {
        bail!("model assumption '{}' fails: {}", c.name, c.detail);
    }
    let c = crossing_data(&run.model)?;
    let mut t = Table::new(&["x_star", "tau0", "tau1", "tau2", "action_derivative"]);
    t.push(vec![
        c.x_star,
        c.tau0,
        c.tau1,
        c.tau2,
        action(&run.model, 0.0)?.action_derivative,
    ]);
    run.write_table("crossing.csv", &t)?;
    Ok(())
}

pub fn identity(run: &mut Run) -> Result<()> {
    require_assumptions(&run.model)?;
    let c = crossing_data(&run.model)?;
    let mut pairs = vec![(1.0, 1.0), (1.0, 2.0), (0.5, 3.0), (c.tau1, c.tau2)];
    pairs.dedup();
    let mut t = Table::new(&["s", "tau1", "tau2", "convolution", "closed", "abs_diff"]);
    let mut worst: f64 = 0.0;
    for &(t1, t2) in &pairs {
        for i in 0..=100 {
            let s = -5.0 + 0.1 * i as f64;
            let (conv, closed) = (a0_convolution(s, t1, t2)?, a0_closed(s, t1, t2)?);
            worst = worst.max((conv - closed).abs());
            t.push(vec![s, t1, t2, conv, closed, (conv - closed).abs()]);
        }
    }
    run.write_table("a0_identity.csv", &t)?;
    run.record(
        "a0_identity",
        Check {
            criterion: 1,
            passed: worst <= 1e-7,
            summary: format!("max |convolution - closed| = {worst:.2e}"),
            fits: Vec::new(),
        },
    );

    let (d0, d1) = cutoff_widths(&run.model)?;
    let profile = PlateauBump::new(d0, d1)?;
    let (full, half) = (ContourPath::new(d0)?, ContourPath::new(0.5 * d0)?);
    let mut t = Table::new(&[
        "lambda",
        "re_f",
        "im_f",
        "abs_f",
        "weighted_abs_f",
        "radius_diff",
    ]);
    let (mut invariance, mut early, mut late): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..=220 {
        let l = -10.0 + 0.5 * i as f64;
        let f = f_contour(l, &full, &profile)?;
        let diff = (f - f_contour(l, &half, &profile)?).norm();
        let weighted = f.norm() * (1.0 + l * l).powf(1.5);
        if l <= 100.0 {
            invariance = invariance.max(diff);
        }
        if (10.0..=55.0).contains(&l) {
            early = early.max(weighted);
        }
        if l >= 55.0 {
            late = late.max(weighted);
        }
        t.push(vec![l, f.re, f.im, f.norm(), weighted, diff]);
    }
    run.write_table("contour_function.csv", &t)?;
    let f0 = f_contour(0.0, &full, &profile)?.norm();
    run.record(
        "contour_function",
        Check {
            criterion: 2,
            passed: f0 >= 1.0 / d1 && invariance <= 1e-8 && late.is_finite() && late <= early,
            summary: format!(
                "|F(0)| = {f0:.4} vs 1/delta1 = {:.4}; radius invariance {invariance:.1e}; sup |F|<l>^3 on [10,55] {early:.1}, on [55,100] {late:.1}",
                1.0 / d1
            ),
            fits: Vec::new(),
        },
    );
    run.write_gnuplot(
        "identity.gp",
        "contour function",
        false,
        &[
            Plot::new("contour_function.csv", 1, 2, "Re F").lines(),
            Plot::new("contour_function.csv", 1, 3, "Im F").lines(),
        ],
    )?;
    Ok(())
}

pub fn eigen(run: &mut Run) -> Result<()> {
    require_assumptions(&run.model)?;
    let m = &run.model;
    let mut t = Table::new(&[
        "h",
        "k",
        "lambda0",
        "bohr_sommerfeld",
        "abs_diff",
        "residual",
    ]);
    let mut pairs = Vec::new();
    for &h in &run.cfg.h_list {
        let g = ground_state(m, h, default_window(m, h)?)
            .with_context(|| format!("ground state at h = {h}"))?;
        let e = bohr_sommerfeld(m, h, g.k_index, 2.0)?;
        let diff = (g.lambda0 - e).abs();
        log::info!("h = {h}: lambda0 = {}, k = {}", g.lambda0, g.k_index);
        t.push(vec![h, g.k_index as f64, g.lambda0, e, diff, g.residual]);
        pairs.push((h, diff));
    }
    run.write_table("eigen.csv", &t)?;
    let fit = fit_slope("|lambda0 - e_k|", &pairs)?.expect(Expectation::Within {
        target: 2.0,
        tolerance: 0.3,
    });
    run.record(
        "bohr_sommerfeld",
        fit_check(3, vec![fit], true, String::new()),
    );
    run.write_gnuplot(
        "eigen.gp",
        "ground level against quantization",
        true,
        &[Plot::new("eigen.csv", 1, 5, "|lambda0 - e_k|")],
    )?;
    Ok(())
}

pub fn resonance(run: &mut Run) -> Result<()> {
    require_assumptions(&run.model)?;
    let opts = survival_options(run);
    let mut t = Table::new(&[
        "h",
        "lambda0",
        "re_rho0",
        "im_rho0",
        "re_b",
        "im_b",
        "shift",
        "b_deviation",
        "theta_drift",
        "residual",
    ]);
    let (mut width, mut shift, mut deviation) = (Vec::new(), Vec::new(), Vec::new());
    let (mut negative, mut drift) = (true, 0.0f64);
    for &h in &run.cfg.h_list {
        let s = survival_setup(&run.model, h, &opts)
            .with_context(|| format!("resonance at h = {h}"))?;
        let (r, lambda0) = (&s.resonance, s.ground.ground.lambda0);
        negative &= r.rho0.im < 0.0;
        drift = drift.max(r.theta_drift());
        let sh = (r.rho0 - lambda0).norm();
        let dev = (r.b - 1.0).norm();
        t.push(vec![
            h,
            lambda0,
            r.rho0.re,
            r.rho0.im,
            r.b.re,
            r.b.im,
            sh,
            dev,
            r.theta_drift(),
            r.residual,
        ]);
        width.push((h, -r.rho0.im));
        shift.push((h, sh));
        deviation.push((h, dev));
    }
    run.write_table("resonance.csv", &t)?;
    let fits = vec![
        fit_slope("|Im rho0|", &width)?.expect(Expectation::AtLeast {
            bound: 5.0 / 3.0 - 0.25,
        }),
        fit_slope("|rho0 - lambda0|", &shift)?.expect(Expectation::AtLeast {
            bound: 4.0 / 3.0 - 0.25,
        }),
    ];
    run.record(
        "resonance_scaling",
        fit_check(
            5,
            fits,
            negative && drift <= 1e-8,
            format!("Im rho0 < 0 at every h: {negative}; theta drift {drift:.1e}"),
        ),
    );
    let decreasing = deviation.windows(2).all(|w| w[1].1 < w[0].1);
    let fit = fit_slope("|b - 1|", &deviation)?.expect(Expectation::AtLeast {
        bound: 1.0 / 3.0 - 0.15,
    });
    run.record(
        "overlap_coefficient",
        fit_check(
            6,
            vec![fit],
            decreasing,
            format!("decreasing: {decreasing}"),
        ),
    );
    run.write_gnuplot(
        "resonance.gp",
        "resonance scalings",
        true,
        &[
            Plot::new("resonance.csv", 1, 7, "|rho0 - lambda0|"),
            Plot::new("resonance.csv", 1, 8, "|b - 1|"),
        ],
    )?;
    Ok(())
}

pub fn kernels(run: &mut Run) -> Result<()> {
    require_assumptions(&run.model)?;
    let model = run.model.clone();
    let m = &model;
    let (d0, _) = cutoff_widths(m)?;
    let wkb = wkb_config(run);
    let opts = NormOptions {
        wkb,
        multiplier: run.cfg.multiplier,
        seed: run.cfg.seed,
        ..NormOptions::default()
    };
    let mut t = Table::new(&[
        "h", "re_z", "im_z", "k2_left", "k1_left", "r1", "r2_plus", "r2_minus", "m_plus", "m_minus",
    ]);
    let mut rows = Vec::new();
    for &h in &run.cfg.h_list {
        let g = ground_state(m, h, default_window(m, h)?)?;
        let r = norm_row(m, h, contour_probe(g.lambda0, d0, h), &opts)
            .with_context(|| format!("operator norms at h = {h}"))?;
        t.push(vec![
            h, r.z.re, r.z.im, r.k2_left, r.k1_left, r.r1, r.r2_plus, r.r2_minus, r.m_plus,
            r.m_minus,
        ]);
        rows.push(r);
    }
    run.write_table("operator_norms.csv", &t)?;
    let worst = rows
        .iter()
        .map(|r| r.m_plus.max(r.m_minus))
        .fold(0.0, f64::max);
    run.record(
        "operator_scalings",
        fit_check(
            4,
            norm_fits(&rows)?,
            worst < 1.0,
            format!("max ||M|| {worst:.3}"),
        ),
    );

    let c = crossing_data(m)?;
    let mut t = Table::new(&[
        "h",
        "re_overlap",
        "im_overlap",
        "airy_prediction",
        "rel_error",
    ]);
    let mut errors = Vec::new();
    for &h in &run.cfg.h_list {
        let st = coupled_ground_state(m, h)?;
        let mu0 = st.ground.lambda0 * h.powf(-2.0 / 3.0);
        let ab = ab_integrals(mu0, mu0, c.tau1, c.tau2)?;
        let z = Complex64::new(st.ground.lambda0, 0.0);
        let got = st.overlap(m, 2, Side::Left, Kind::Minus, z, &opts.wkb)? * h.powf(-0.5);
        let want = 4.0 * m.a0(0.0) * st.ground.c0 * ab.a_minus;
        let err = (got - want).norm() / want.abs();
        t.push(vec![h, got.re, got.im, want, err]);
        errors.push((h, err));
    }
    run.write_table("airy_overlap.csv", &t)?;
    let decreasing = errors.windows(2).all(|w| w[1].1 < w[0].1);
    let fit = fit_slope("overlap relative error", &errors)?.expect(Expectation::AtLeast {
        bound: 1.0 / 3.0 - 0.15,
    });
    run.record(
        "airy_overlap",
        fit_check(
            9,
            vec![fit],
            decreasing,
            format!("decreasing: {decreasing}"),
        ),
    );
    run.write_gnuplot(
        "kernels.gp",
        "kernel and operator norms",
        true,
        &[
            Plot::new("operator_norms.csv", 1, 4, "K2 left"),
            Plot::new("operator_norms.csv", 1, 5, "K1 left"),
            Plot::new("operator_norms.csv", 1, 6, "R1"),
            Plot::new("operator_norms.csv", 1, 7, "R2 plus"),
            Plot::new("operator_norms.csv", 1, 8, "R2 minus"),
            Plot::new("airy_overlap.csv", 1, 5, "overlap error"),
        ],
    )?;
    Ok(())
}

pub fn survive(run: &mut Run) -> Result<()> {
    require_assumptions(&run.model)?;
    let opts = survival_options(run);
    let samples = run.cfg.samples;
    let mut summary = Table::new(&[
        "h",
        "re_rho0",
        "im_rho0",
        "max_residual",
        "constant",
        "gain_at_zero",
        "weighted_5_10",
        "weighted_20_40",
        "critical_crossing",
        "critical_lower_bound",
        "critical_reference",
    ]);
    let mut constants = Vec::new();
    let mut gain = 0.0;
    let mut plots = Vec::new();
    for &h in &run.cfg.h_list.clone() {
        let s = survival_setup(&run.model, h, &opts)
            .with_context(|| format!("survival setup at h = {h}"))?;
        let density = s.density(&run.model, &opts)?;
        let times: Vec<f64> = (0..=samples)
            .map(|k| s.t_max(&opts) * k as f64 / samples as f64)
            .collect();
        let full = survival_amplitude(&density, &s.predictor, &times)?;
        let bare = survival_amplitude(&density, &s.predictor.without_correction(), &times[..1])?;
        gain = bare.residual[0].norm() / full.residual[0].norm();
        let c = full.max_residual() / h;
        constants.push(c);

        let mut t = Table::new(&[
            "t",
            "ht",
            "re_a",
            "im_a",
            "abs_a",
            "re_pred",
            "im_pred",
            "abs_residual",
        ]);
        for (k, &tt) in full.times.iter().enumerate() {
            let (a, p) = (full.amplitude[k], full.predictor[k]);
            t.push(vec![
                tt,
                h * tt,
                a.re,
                a.im,
                a.norm(),
                p.re,
                p.im,
                full.residual[k].norm(),
            ]);
        }
        let name = format!("survival_h{}.csv", file_tag(h));
        run.write_table(&name, &t)?;
        plots.push(Plot::new(&name, 2, 8, &format!("|residual| h = {h}")).lines());

        let probe: Vec<f64> = (0..=300).map(|k| 10f64.powf(k as f64 / 75.0) / h).collect();
        let ct = critical_time_report(&s.predictor, &probe)?;
        summary.push(vec![
            h,
            s.resonance.rho0.re,
            s.resonance.rho0.im,
            full.max_residual(),
            c,
            gain,
            full.weighted_residual(5.0 / h, 10.0 / h, 3),
            full.weighted_residual(20.0 / h, 40.0 / h, 3),
            ct.crossing.unwrap_or(f64::NAN),
            ct.lower_bound,
            ct.reference,
        ]);
    }
    run.write_table("survival_summary.csv", &summary)?;
    let n = constants.len();
    let ratio = constants[n - 2].max(constants[n - 1]) / constants[n - 2].min(constants[n - 1]);
    run.record(
        "end_to_end",
        Check {
            criterion: 7,
            passed: ratio <= 3.0 && gain >= 2.0,
            summary: format!(
                "C = max|residual|/h over h t <= {}: {}; ratio of two smallest {ratio:.2}; gain from q0 at t = 0: {gain:.2}",
                opts.horizon,
                constants.iter().map(|c| format!("{c:.4}")).collect::<Vec<_>>().join(", ")
            ),
            fits: Vec::new(),
        },
    );

    let h = run.cfg.h_list[0];
    let m = run.model.decoupled();
    let s = survival_setup(&m, h, &opts)?;
    let lambda0 = s.ground.ground.lambda0;
    let shift = (s.resonance.rho0 - lambda0).norm();
    let (lo, hi) = s.cutoff.support();
    let eig = eigendecompose_box(
        &m,
        &s.ground.ground.disc,
        Some((lo - 1e-3 * h, hi + 1e-3 * h)),
    )?;
    let exact = BoxAmplitude::new(&m, &s.cutoff, &eig, &s.state)?;
    let mut t = Table::new(&["t", "abs_a", "abs_diff"]);
    let mut worst: f64 = 0.0;
    for k in 0..=400 {
        let tt = exact.horizon() * k as f64 / 400.0;
        let a = exact.amplitude(tt);
        let d = (a - Complex64::from_polar(1.0, -tt * lambda0)).norm();
        worst = worst.max(d);
        t.push(vec![tt, a.norm(), d]);
    }
    run.write_table("decoupled.csv", &t)?;
    run.record(
        "decoupled_oracle",
        Check {
            criterion: 8,
            passed: worst <= 1e-10 && shift <= 1e-10,
            summary: format!(
                "max |A(t) - e^(-i t lambda0)| = {worst:.1e} up to t = {:.0} at h = {h}; |rho0 - lambda0| = {shift:.1e}",
                exact.horizon()
            ),
            fits: Vec::new(),
        },
    );
    run.write_gnuplot("survive.gp", "survival residual", true, &plots)?;
    Ok(())
}

/// Collects every manifest in the output directory into `report.csv`.
pub fn report(run: &mut Run) -> Result<()> {
    let manifests = read_manifests(run.out_dir())?;
    if manifests.is_empty() {
        bail!("no manifests found in {}", run.out_dir().display());
    }
    let mut rows = Vec::new();
    for m in &manifests {
        if m.config_hash != run.hash {
            log::warn!(
                "{} was produced with config {}, not {}",
                m.subcommand,
                m.config_hash,
                run.hash
            );
        }
        for (name, c) in &m.checks {
            rows.push(vec![
                c.criterion.to_string(),
                name.clone(),
                m.subcommand.clone(),
                if c.passed { "PASS" } else { "FAIL" }.to_string(),
                (m.config_hash == run.hash).to_string(),
                c.summary.clone(),
            ]);
        }
    }
    rows.sort();
    run.write_records(
        "report.csv",
        &[
            "criterion",
            "check",
            "subcommand",
            "status",
            "current_config",
            "summary",
        ],
        &rows,
    )?;
    let passed = rows.iter().filter(|r| r[3] == "PASS").count();
    run.record(
        "report",
        Check {
            criterion: 0,
            passed: true,
            summary: format!(
                "{passed} of {} checks pass across {} manifests",
                rows.len(),
                manifests.len()
            ),
            fits: Vec::new(),
        },
    );
    Ok(())
}

fn read_manifests(dir: &Path) -> Result<Vec<crate::output::Manifest>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.ends_with(".manifest.json") && n != "report.manifest.json")
        })
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p)?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        })
        .collect()
}
