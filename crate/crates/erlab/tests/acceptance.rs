//! End-to-end acceptance gate: fourteen numbered criteria, one pass/fail
//! line each (run with `--nocapture` to see the lines as they complete).

use std::time::Instant;

use erlab::dims::{
    bm_exit_curve, fbm_default_radii, fbm_graph_walk_curve, walk_dimension, FbmWalkParams,
};
use erlab::energy::{
    energy, harmonic_extension, interval_dirichlet_spectrum, sg_dirichlet_spectrum,
    spectral_dimension_fit, VertexFunction,
};
use erlab::fit::log_log_fit;
use erlab::ifs::{moran_dimension, IFSystem};
use erlab::report::{
    emit_report, run_experiment, write_artifacts, BilipschitzConfig, ExperimentConfig,
    HolderConfig, IntervalConfig, ReportFormat, SPECTRAL_FIT_WINDOW,
};
use erlab::sg::build_graph;
use erlab::spaces::{Point, SpaceDescriptor};
use erlab::stats::{ks_two_sample, mean_stderr};
use erlab::stoch::exit::bm_exit_time_mc;
use erlab::stoch::fbm::{sample_fbm, FbmMethod};
use erlab::stoch::srw::{exact_crossing_mean, sg_walk_curve, srw_crossing_stats};
use erlab::stoch::RngSpec;

fn verdict(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} ({detail})",
        if pass { "pass" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

const LOG3_LOG2: f64 = 1.5849625007211563;
const LOG3_LOG5: f64 = 0.6826061944859854;
const LOG5_LOG2: f64 = 2.321928094887362;

#[test]
fn criterion_01_moran_exactness() {
    // warm call, then timed call
    moran_dimension(&[0.5, 0.5, 0.5]).unwrap();
    let t0 = Instant::now();
    let s = moran_dimension(&[0.5, 0.5, 0.5]).unwrap();
    let elapsed = t0.elapsed();
    let err = (s - LOG3_LOG2).abs();
    verdict(
        "01 moran_exactness",
        err < 1e-10 && elapsed.as_micros() < 1000,
        &format!("|s − log3/log2| = {err:.2e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_02_harmonic_extension_golden() {
    let g0 = build_graph(0).unwrap();
    let corners = g0.boundary;
    let mut values = vec![0.0; 3];
    values[corners[0]] = 1.0;
    let u0 = VertexFunction::new(&g0, values).unwrap();
    let (g1, u1) = harmonic_extension(&g0, &u0).unwrap();
    let m_bc = g1.find_vertex([0.75, 3f64.sqrt() / 4.0]).unwrap();
    let m_ab = g1.find_vertex([0.5, 0.0]).unwrap();
    let m_ac = g1.find_vertex([0.25, 3f64.sqrt() / 4.0]).unwrap();
    let golden = u1.values[m_bc] == 0.2 && u1.values[m_ab] == 0.4 && u1.values[m_ac] == 0.4;

    // energy ratio 3/5 over 100 random boundary-value problems
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
    let mut max_ratio_err: f64 = 0.0;
    for _ in 0..100 {
        let values: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u = VertexFunction::new(&g0, values).unwrap();
        let e0 = energy(&g0, &u, false).unwrap();
        if e0 < 1e-12 {
            continue;
        }
        let (g1, u1) = harmonic_extension(&g0, &u).unwrap();
        let e1 = energy(&g1, &u1, false).unwrap();
        max_ratio_err = max_ratio_err.max((e1 / e0 - 0.6).abs());
    }
    verdict(
        "02 harmonic_extension_golden",
        golden && max_ratio_err < 1e-12,
        &format!("midpoints exact: {golden}, max |Ẽ₁/Ẽ₀ − 3/5| = {max_ratio_err:.2e}"),
    );
}

#[test]
fn criterion_03_srw_crossing_times() {
    let mut max_err: f64 = 0.0;
    for (n, m) in [(1usize, 0usize), (2, 0), (2, 1), (3, 1)] {
        let exact = exact_crossing_mean(n, m).unwrap();
        max_err = max_err.max((exact - 5f64.powi((n - m) as i32)).abs());
    }
    let stats = srw_crossing_stats(2, 0, RngSpec::new(17), 10_000).unwrap();
    let z = (stats.mc_mean - stats.exact_mean).abs() / stats.mc_stderr;
    verdict(
        "03 srw_crossing_times",
        max_err < 1e-9 && z < 3.0,
        &format!("max exact error {max_err:.2e}, MC z = {z:.2}"),
    );
}

#[test]
fn criterion_04_interval_spectral_dimension() {
    let t0 = Instant::now();
    let spectrum = interval_dirichlet_spectrum(2000).unwrap();
    let fit = spectral_dimension_fit(&spectrum, SPECTRAL_FIT_WINDOW).unwrap();
    let elapsed = t0.elapsed();
    verdict(
        "04 interval_spectral_dimension",
        (fit.slope - 0.5).abs() < 0.02 && elapsed.as_secs() < 30,
        &format!("slope {:.4} vs 0.5, r2 {:.4}, {elapsed:?}", fit.slope, fit.r2),
    );
}

#[test]
fn criterion_05_sg_spectral_dimension() {
    let t0 = Instant::now();
    let spectrum = sg_dirichlet_spectrum(6).unwrap();
    let fit = spectral_dimension_fit(&spectrum, SPECTRAL_FIT_WINDOW).unwrap();
    let elapsed = t0.elapsed();
    verdict(
        "05 sg_spectral_dimension",
        (fit.slope - LOG3_LOG5).abs() < 0.05 && elapsed.as_secs() < 60,
        &format!(
            "slope {:.4} vs log3/log5 = {LOG3_LOG5:.4}, r2 {:.4}, {elapsed:?}",
            fit.slope, fit.r2
        ),
    );
}

#[test]
fn criterion_06_bm_exit_times() {
    let line = SpaceDescriptor::Euclidean { dim: 1 };
    let plane = SpaceDescriptor::Euclidean { dim: 2 };
    let mut max_z: f64 = 0.0;
    for &r in &[0.1, 0.2, 0.4] {
        let est = bm_exit_time_mc(&line, &Point::one(0.0), r, 3e-5 * r * r, 3000, RngSpec::new(61))
            .unwrap();
        max_z = max_z.max((est.mean - r * r).abs() / est.stderr);
        let est = bm_exit_time_mc(
            &plane,
            &Point::two(0.0, 0.0),
            r,
            3e-5 * r * r,
            3000,
            RngSpec::new(62),
        )
        .unwrap();
        max_z = max_z.max((est.mean - r * r / 2.0).abs() / est.stderr);
    }
    let radii = [0.4, 0.2, 0.1, 0.05];
    let curve = bm_exit_curve(&line, &Point::one(0.0), &radii, 3000, RngSpec::new(63)).unwrap();
    let slope = walk_dimension(&curve).unwrap().value;
    verdict(
        "06 bm_exit_times",
        max_z < 3.0 && (slope - 2.0).abs() < 0.05,
        &format!("max |z| = {max_z:.2}, walk slope {slope:.4}"),
    );
}

#[test]
fn criterion_07_arctan_space() {
    let space = SpaceDescriptor::ArctanLine;
    let r = 0.3f64;
    let est =
        bm_exit_time_mc(&space, &Point::one(0.0), r, 3e-5 * r * r, 3000, RngSpec::new(71)).unwrap();
    let target = r.tan() * r.tan();
    let z = (est.mean - target).abs() / est.stderr;
    let radii = [0.2, 0.1, 0.05, 0.025];
    let curve = bm_exit_curve(&space, &Point::one(0.0), &radii, 3000, RngSpec::new(72)).unwrap();
    let slope = walk_dimension(&curve).unwrap().value;
    verdict(
        "07 arctan_space",
        z < 3.0 && (slope - 2.0).abs() < 0.05,
        &format!("exit-mean z = {z:.2} vs tan(0.3)², walk slope {slope:.4}"),
    );
}

#[test]
fn criterion_08_sg_walk_dimension() {
    let (radii, times) = sg_walk_curve(7, 1..=5).unwrap();
    let fit = log_log_fit(&radii, &times).unwrap();
    verdict(
        "08 sg_walk_dimension",
        (fit.slope - LOG5_LOG2).abs() < 0.1,
        &format!("slope {:.4} vs log5/log2 = {LOG5_LOG2:.4}", fit.slope),
    );
}

#[test]
fn criterion_09_einstein_identity_sg() {
    // numerical: the three independent estimates
    let dim_h = moran_dimension(&IFSystem::sierpinski().ratios()).unwrap();
    let spectrum = sg_dirichlet_spectrum(6).unwrap();
    let dim_s = spectral_dimension_fit(&spectrum, SPECTRAL_FIT_WINDOW)
        .unwrap()
        .slope;
    let (radii, times) = sg_walk_curve(7, 1..=5).unwrap();
    let dim_w = log_log_fit(&radii, &times).unwrap().slope;
    let c = dim_h / (dim_s * dim_w);
    // closed form: (log3/log2)/((log3/log5)(log5/log2)) = 1
    let c_closed = LOG3_LOG2 / (LOG3_LOG5 * LOG5_LOG2);
    verdict(
        "09 einstein_identity_sg",
        (c - 1.0).abs() < 0.10 && (c_closed - 1.0).abs() < 1e-12,
        &format!("numerical c = {c:.4}, closed-form |c − 1| = {:.2e}", (c_closed - 1.0).abs()),
    );
}

#[test]
fn criterion_10_fbm_validity() {
    let n = 256;
    let n_paths = 3000u64;
    let mut max_z: f64 = 0.0;
    for &h in &[0.3, 0.5, 0.7] {
        let spec = RngSpec::new((h * 1000.0) as u64);
        let paths: Vec<Vec<f64>> = (0..n_paths)
            .map(|p| {
                let mut rng = spec.task_rng(p);
                sample_fbm(h, n, 1.0, &mut rng, FbmMethod::Circulant)
                    .unwrap()
                    .values
            })
            .collect();
        for (s, t) in [(0.25, 0.5), (0.25, 0.75), (0.5, 0.75)] {
            let (i, j) = ((s * n as f64) as usize, (t * n as f64) as usize);
            let prods: Vec<f64> = paths.iter().map(|p| p[i] * p[j]).collect();
            let (mean, se) = mean_stderr(&prods).unwrap();
            let target =
                0.5 * (s.powf(2.0 * h) + t.powf(2.0 * h) - (t - s).abs().powf(2.0 * h));
            max_z = max_z.max((mean - target).abs() / se);
        }
    }
    // self-similarity: X_2 / 2^H from a horizon-2 run matches X_1 from a
    // horizon-1 run in distribution
    let mut ks_ok = true;
    for &h in &[0.3, 0.5, 0.7] {
        let sample = |horizon: f64, stream: u64| -> Vec<f64> {
            let spec = RngSpec::new(101).with_stream(stream + (h * 10.0) as u64 * 10);
            (0..2000)
                .map(|p| {
                    let mut rng = spec.task_rng(p);
                    *sample_fbm(h, n, horizon, &mut rng, FbmMethod::Circulant)
                        .unwrap()
                        .values
                        .last()
                        .unwrap()
                })
                .collect()
        };
        let a = sample(1.0, 1);
        let b: Vec<f64> = sample(2.0, 2)
            .into_iter()
            .map(|v| v / 2f64.powf(h))
            .collect();
        let (d, crit) = ks_two_sample(&a, &b).unwrap();
        ks_ok &= d < crit;
    }
    verdict(
        "10 fbm_validity",
        max_z < 3.0 && ks_ok,
        &format!("max covariance |z| = {max_z:.2}, self-similarity KS pass: {ks_ok}"),
    );
}

#[test]
fn criterion_11_fbm_graph_walk_dimension() {
    let params = FbmWalkParams {
        steps_per_crossing: 100,
        n_paths: 200,
        anchors_per_path: 20,
    };
    let mut all = true;
    let mut details = Vec::new();
    for &h in &[0.3, 0.5, 0.7] {
        let radii = fbm_default_radii(h);
        let curves =
            fbm_graph_walk_curve(h, &radii, params, RngSpec::new(110 + (h * 10.0) as u64)).unwrap();
        let slope = walk_dimension(&curves.product).unwrap().value;
        let plus = log_log_fit(&curves.plus.radii, &curves.plus.means).unwrap().slope;
        let minus = log_log_fit(&curves.minus.radii, &curves.minus.means)
            .unwrap()
            .slope;
        // conjecture-level observation, not a theorem: with the geometric
        // target dim_h = 2 − H and spectral value 1/2, the Einstein constant
        // should track c(H) = H(2 − H)
        let c = (2.0 - h) / (0.5 * slope);
        let ok = (slope - 2.0 / h).abs() < 0.2
            && (plus - 1.0 / h).abs() < 0.15
            && (minus - 1.0 / h).abs() < 0.15
            && (c - h * (2.0 - h)).abs() < 0.1;
        all &= ok;
        details.push(format!(
            "H={h}: slope {slope:.3} vs {:.3}, legs {plus:.3}/{minus:.3} vs {:.3}, conjectured c {c:.3} vs {:.3}",
            2.0 / h,
            1.0 / h,
            h * (2.0 - h)
        ));
    }
    verdict("11 fbm_graph_walk_dimension", all, &details.join("; "));
}

#[test]
fn criterion_12_holder_bound_strictness() {
    let cfg = HolderConfig {
        alpha: 0.5,
        n_paths: 3000,
        seed: 120,
        ..Default::default()
    };
    let out = run_experiment(&ExperimentConfig::HolderCounterexample(cfg)).unwrap();
    let dim_w = out.report.dim_w.value;
    verdict(
        "12 holder_bound_strictness",
        (dim_w - 2.0).abs() < 0.1 && dim_w < 4.0 && out.report.pass,
        &format!("image walk dimension {dim_w:.4}, bound 2/α = 4"),
    );
}

#[test]
fn criterion_13_bilipschitz_invariance() {
    let mut all = true;
    let mut details = Vec::new();
    for &scale in &[0.5, 3.0] {
        let cfg = BilipschitzConfig {
            scale,
            seed: 130,
            ..Default::default()
        };
        let out = run_experiment(&ExperimentConfig::BilipschitzCheck(cfg)).unwrap();
        let drift = out
            .report
            .checks
            .iter()
            .filter(|ch| ch.name.ends_with("_drift"))
            .map(|ch| ch.estimate.abs())
            .fold(0.0f64, f64::max);
        all &= out.report.pass;
        details.push(format!("scale {scale}: max drift {drift:.4}, pass {}", out.report.pass));
    }
    verdict("13 bilipschitz_invariance", all, &details.join("; "));
}

#[test]
fn criterion_14_determinism() {
    let cfg = ExperimentConfig::EuclideanInterval(IntervalConfig {
        n_paths: 500,
        interior_nodes: 400,
        seed: 140,
        ..Default::default()
    });
    let base = std::env::temp_dir().join(format!("erlab_acceptance_{}", std::process::id()));
    let mut bytes = Vec::new();
    for run in 0..2 {
        let out = run_experiment(&cfg).unwrap();
        let dir = base.join(format!("run{run}"));
        write_artifacts(&dir, &out).unwrap();
        bytes.push(std::fs::read(dir.join("report.json")).unwrap());
        // the in-memory serialization must match the file byte for byte
        assert_eq!(
            bytes[run],
            emit_report(&out.report, ReportFormat::Json).into_bytes()
        );
    }
    let identical = bytes[0] == bytes[1];
    std::fs::remove_dir_all(&base).ok();
    verdict(
        "14 determinism",
        identical,
        &format!("report.json identical across runs: {identical}"),
    );
}
