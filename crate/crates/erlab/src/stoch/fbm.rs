//! Fractional Brownian motion sampling by circulant embedding
//! (Davies–Harte) with a dense Cholesky fallback.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::stoch::PathSample;

/// Largest step count for the dense Cholesky route (`n × n` matrix).
pub const MAX_CHOLESKY: usize = 1 << 14;
/// Largest step count for the circulant route.
pub const MAX_CIRCULANT: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbmMethod {
    Cholesky,
    Circulant,
    /// Circulant when it applies, Cholesky for small `n` otherwise.
    Auto,
}

/// Covariance of fractional Gaussian noise at lag `k` with step `dt`:
/// `γ(k) = ½ (|k+1|^{2H} − 2|k|^{2H} + |k−1|^{2H}) · dt^{2H}`.
fn fgn_cov(h: f64, k: usize, dt: f64) -> f64 {
    let k = k as f64;
    0.5 * ((k + 1.0).powf(2.0 * h) - 2.0 * k.powf(2.0 * h) + (k - 1.0).abs().powf(2.0 * h))
        * dt.powf(2.0 * h)
}

/// Samples fBM with Hurst exponent `h` on `n` steps over `[0, horizon]`.
///
/// The path starts at 0 and has `n + 1` values.
pub fn sample_fbm(
    h: f64,
    n: usize,
    horizon: f64,
    rng: &mut impl Rng,
    method: FbmMethod,
) -> Result<PathSample> {
    if !(0.0..1.0).contains(&h) || h <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Hurst exponent must lie in (0,1), got {h}"
        )));
    }
    if n == 0 || !horizon.is_finite() || horizon <= 0.0 {
        return Err(Error::InvalidParameter(
            "need n ≥ 1 steps and a positive horizon".into(),
        ));
    }
    let dt = horizon / n as f64;
    let increments = match method {
        FbmMethod::Cholesky => fgn_cholesky(h, n, dt, rng)?,
        FbmMethod::Circulant => fgn_circulant(h, n, dt, rng)?,
        FbmMethod::Auto => match fgn_circulant(h, n, dt, rng) {
            Ok(inc) => inc,
            Err(e) if n <= MAX_CHOLESKY => {
                eprintln!("circulant embedding failed ({e}); falling back to Cholesky");
                fgn_cholesky(h, n, dt, rng)?
            }
            Err(e) => return Err(e),
        },
    };
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    let mut acc = 0.0;
    for inc in increments {
        acc += inc;
        values.push(acc);
    }
    Ok(PathSample {
        dt,
        values,
        hurst: Some(h),
    })
}

fn fgn_circulant(h: f64, n: usize, dt: f64, rng: &mut impl Rng) -> Result<Vec<f64>> {
    if n > MAX_CIRCULANT {
        return Err(Error::InvalidParameter(format!(
            "circulant embedding capped at n = {MAX_CIRCULANT}, got {n}"
        )));
    }
    if n == 1 {
        let z: f64 = rng.sample(StandardNormal);
        return Ok(vec![z * dt.powf(h)]);
    }
    let m = 2 * n;
    // first row of the circulant: γ(0..n), γ(n−1..1)
    let mut row: Vec<Complex<f64>> = Vec::with_capacity(m);
    for k in 0..=n {
        row.push(Complex::new(fgn_cov(h, k, dt), 0.0));
    }
    for k in (1..n).rev() {
        row.push(Complex::new(fgn_cov(h, k, dt), 0.0));
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);
    let lambda: Vec<f64> = row.iter().map(|c| c.re).collect();
    let lmax = lambda.iter().cloned().fold(0.0f64, f64::max);
    if lambda.iter().any(|&l| l < -1e-10 * lmax.max(1e-300)) {
        return Err(Error::InvalidParameter(format!(
            "circulant embedding not nonnegative definite for H = {h}"
        )));
    }
    // independent complex Gaussians in every slot: the real part of the FFT
    // then carries the target covariance at half weight, restored by √2
    let mut w: Vec<Complex<f64>> = lambda
        .iter()
        .map(|&l| {
            let a = (l.max(0.0) / (2.0 * m as f64)).sqrt();
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            Complex::new(a * z1, a * z2)
        })
        .collect();
    fft.process(&mut w);
    Ok(w[..n].iter().map(|c| c.re * 2f64.sqrt()).collect())
}

fn fgn_cholesky(h: f64, n: usize, dt: f64, rng: &mut impl Rng) -> Result<Vec<f64>> {
    if n > MAX_CHOLESKY {
        return Err(Error::InvalidParameter(format!(
            "Cholesky sampling capped at n = {MAX_CHOLESKY}, got {n}"
        )));
    }
    let cov = DMatrix::from_fn(n, n, |i, j| fgn_cov(h, i.abs_diff(j), dt));
    let chol = nalgebra::Cholesky::new(cov).ok_or_else(|| {
        Error::InvalidParameter("fGn covariance is not positive definite".into())
    })?;
    let z = nalgebra::DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    Ok((chol.l() * z).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{ks_two_sample, mean_stderr};
    use crate::stoch::RngSpec;
    use approx::assert_relative_eq;

    fn fbm_cov(h: f64, s: f64, t: f64) -> f64 {
        0.5 * (s.powf(2.0 * h) + t.powf(2.0 * h) - (t - s).abs().powf(2.0 * h))
    }

    fn empirical_cov(h: f64, method: FbmMethod, n_paths: usize) -> (f64, f64, f64) {
        // returns (cov(X_.25, X_.75) estimate, stderr, target)
        let spec = RngSpec::new(9);
        let n = 256;
        let mut prods = Vec::with_capacity(n_paths);
        for p in 0..n_paths {
            let mut rng = spec.task_rng(p as u64);
            let path = sample_fbm(h, n, 1.0, &mut rng, method).unwrap();
            prods.push(path.values[n / 4] * path.values[3 * n / 4]);
        }
        let (m, se) = mean_stderr(&prods).unwrap();
        (m, se, fbm_cov(h, 0.25, 0.75))
    }

    #[test]
    fn circulant_covariance_matches_target() {
        for &h in &[0.3, 0.5, 0.7] {
            let (m, se, target) = empirical_cov(h, FbmMethod::Circulant, 4000);
            assert!(
                (m - target).abs() < 4.0 * se,
                "H = {h}: cov {m} vs {target} (se {se})"
            );
        }
    }

    #[test]
    fn cholesky_covariance_matches_target() {
        let (m, se, target) = empirical_cov(0.7, FbmMethod::Cholesky, 4000);
        assert!((m - target).abs() < 4.0 * se);
    }

    #[test]
    fn methods_agree_in_distribution() {
        // terminal-value samples from both generators pass a KS test
        let spec = RngSpec::new(12);
        let n = 128;
        let h = 0.4;
        let sample = |method, stream: u64| -> Vec<f64> {
            (0..1500)
                .map(|p| {
                    let mut rng = spec.with_stream(stream).task_rng(p);
                    *sample_fbm(h, n, 1.0, &mut rng, method)
                        .unwrap()
                        .values
                        .last()
                        .unwrap()
                })
                .collect()
        };
        let a = sample(FbmMethod::Circulant, 1);
        let b = sample(FbmMethod::Cholesky, 2);
        let (d, crit) = ks_two_sample(&a, &b).unwrap();
        assert!(d < crit, "KS {d} ≥ {crit}");
    }

    #[test]
    fn half_hurst_is_brownian_scaling() {
        // for H = 1/2 the variance of X_1 is exactly 1
        let spec = RngSpec::new(5);
        let vals: Vec<f64> = (0..4000)
            .map(|p| {
                let mut rng = spec.task_rng(p);
                *sample_fbm(0.5, 64, 1.0, &mut rng, FbmMethod::Circulant)
                    .unwrap()
                    .values
                    .last()
                    .unwrap()
            })
            .collect();
        let sq: Vec<f64> = vals.iter().map(|v| v * v).collect();
        let (m, se) = mean_stderr(&sq).unwrap();
        assert!((m - 1.0).abs() < 4.0 * se, "var {m} (se {se})");
    }

    #[test]
    fn path_shape_and_grid() {
        let mut rng = RngSpec::new(1).rng();
        let p = sample_fbm(0.6, 100, 2.0, &mut rng, FbmMethod::Auto).unwrap();
        assert_eq!(p.len(), 101);
        assert_eq!(p.values[0], 0.0);
        assert_relative_eq!(p.dt, 0.02, epsilon = 1e-15);
        assert_relative_eq!(p.horizon(), 2.0, epsilon = 1e-12);
        assert_eq!(p.hurst, Some(0.6));
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = RngSpec::new(1).rng();
        assert!(sample_fbm(0.0, 10, 1.0, &mut rng, FbmMethod::Auto).is_err());
        assert!(sample_fbm(1.0, 10, 1.0, &mut rng, FbmMethod::Auto).is_err());
        assert!(sample_fbm(0.5, 0, 1.0, &mut rng, FbmMethod::Auto).is_err());
        assert!(sample_fbm(0.5, 10, -1.0, &mut rng, FbmMethod::Auto).is_err());
        assert!(sample_fbm(0.5, MAX_CIRCULANT + 1, 1.0, &mut rng, FbmMethod::Circulant).is_err());
    }
}
