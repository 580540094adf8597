//! Small statistical utilities shared by the Monte Carlo experiments.

use crate::error::{Error, Result};

/// Sample mean and standard error.
pub fn mean_stderr(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::NotEnoughData("need ≥ 2 samples".into()));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Two-sample Kolmogorov–Smirnov test at significance level 0.01.
///
/// Returns `(statistic, critical_value)`; the samples are compatible when
/// `statistic < critical_value`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.len() < 10 || b.len() < 10 {
        return Err(Error::NotEnoughData("KS test needs ≥ 10 samples each".into()));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (n, m) = (xs.len(), ys.len());
    let mut d: f64 = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    while i < n && j < m {
        let t = xs[i].min(ys[j]);
        while i < n && xs[i] <= t {
            i += 1;
        }
        while j < m && ys[j] <= t {
            j += 1;
        }
        let gap = (i as f64 / n as f64 - j as f64 / m as f64).abs();
        d = d.max(gap);
    }
    // c(α) for α = 0.01
    let crit = 1.628 * (((n + m) as f64) / ((n * m) as f64)).sqrt();
    Ok((d, crit))
}

/// Chi-square goodness-of-fit against the uniform distribution over
/// `counts.len()` categories, at significance level 0.01.
///
/// Returns `(statistic, critical_value)`.
pub fn chi_square_uniform(counts: &[u64]) -> Result<(f64, f64)> {
    // upper 0.01 quantiles of χ²_k for k = 1..5 degrees of freedom
    const CRIT_01: [f64; 5] = [6.635, 9.210, 11.345, 13.277, 15.086];
    let k = counts.len();
    if !(2..=6).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "chi-square table covers 2..=6 categories, got {k}"
        )));
    }
    let total: u64 = counts.iter().sum();
    if total < 5 * k as u64 {
        return Err(Error::NotEnoughData(
            "chi-square needs ≥ 5 expected counts per cell".into(),
        ));
    }
    let expect = total as f64 / k as f64;
    let stat = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expect;
            d * d / expect
        })
        .sum();
    Ok((stat, CRIT_01[k - 2]))
}
