//! Walk-dimension estimation from exit-time curves, and the curve builders
//! for Brownian balls and fractional Brownian graphs.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{log_log_fit, LineFit};
use crate::spaces::{Point, SpaceDescriptor};
use crate::stats::mean_stderr;
use crate::stoch::crossing::crossing_times;
use crate::stoch::exit::bm_exit_time_mc;
use crate::stoch::fbm::{sample_fbm, FbmMethod, MAX_CIRCULANT};
use crate::stoch::{PathSample, RngSpec};

/// Mean exit (or crossing) times over a decreasing set of radii.
#[derive(Debug, Clone, Serialize)]
pub struct ExitCurve {
    pub radii: Vec<f64>,
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    /// Human-readable tag describing where the curve came from.
    pub source: String,
}

impl ExitCurve {
    pub fn new(radii: Vec<f64>, means: Vec<f64>, stderrs: Vec<f64>, source: &str) -> Result<Self> {
        if radii.len() != means.len() || radii.len() != stderrs.len() {
            return Err(Error::InvalidParameter("curve column lengths differ".into()));
        }
        if radii.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidParameter(
                "curve radii must be strictly decreasing".into(),
            ));
        }
        Ok(ExitCurve {
            radii,
            means,
            stderrs,
            source: source.to_string(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("radius,mean_exit_time,stderr\n");
        for ((r, m), se) in self.radii.iter().zip(&self.means).zip(&self.stderrs) {
            s.push_str(&format!("{r},{m},{se}\n"));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WalkDimKind {
    /// Slope over the full curve: assumes the limit exists.
    LocalLimit,
    /// Maximum slope over trailing (small-radius) windows: a limsup reading.
    UpperLimsup,
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkDimEstimate {
    pub value: f64,
    pub kind: WalkDimKind,
    pub fit: LineFit,
}

fn check_curve(curve: &ExitCurve) -> Result<()> {
    if curve.radii.len() < 4 {
        return Err(Error::NotEnoughData(format!(
            "walk-dimension fit needs ≥ 4 radii, got {}",
            curve.radii.len()
        )));
    }
    let span = curve.radii[0] / curve.radii[curve.radii.len() - 1];
    if span < 4.0 * (1.0 - 1e-9) {
        return Err(Error::NotEnoughData(format!(
            "radii must span ≥ 2 octaves, got factor {span:.3}"
        )));
    }
    Ok(())
}

/// Walk dimension as the slope of `log E[τ(r)]` against `log r`.
pub fn walk_dimension(curve: &ExitCurve) -> Result<WalkDimEstimate> {
    check_curve(curve)?;
    let fit = log_log_fit(&curve.radii, &curve.means)?;
    Ok(WalkDimEstimate {
        value: fit.slope,
        kind: WalkDimKind::LocalLimit,
        fit,
    })
}

/// Upper walk dimension: the largest slope among fits over the trailing
/// `j = 4..=len` smallest radii, tracking a limsup rather than a limit.
pub fn upper_walk_dimension(curve: &ExitCurve) -> Result<WalkDimEstimate> {
    check_curve(curve)?;
    let len = curve.radii.len();
    let mut best: Option<LineFit> = None;
    for j in 4..=len {
        let fit = log_log_fit(&curve.radii[len - j..], &curve.means[len - j..])?;
        if best.map_or(true, |b| fit.slope > b.slope) {
            best = Some(fit);
        }
    }
    let fit = best.expect("at least one window");
    Ok(WalkDimEstimate {
        value: fit.slope,
        kind: WalkDimKind::UpperLimsup,
        fit,
    })
}

/// Builds a Brownian exit-time curve by Monte Carlo, one estimate per radius.
/// The Euler step scales as `3·10⁻⁵ r²` so the relative discretization bias
/// is the same at every radius and cancels out of the slope.
pub fn bm_exit_curve(
    space: &SpaceDescriptor,
    start: &Point,
    radii: &[f64],
    n_paths: usize,
    spec: RngSpec,
) -> Result<ExitCurve> {
    let mut means = Vec::with_capacity(radii.len());
    let mut stderrs = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        let est = bm_exit_time_mc(
            space,
            start,
            r,
            3e-5 * r * r,
            n_paths,
            spec.with_stream(spec.stream + i as u64),
        )?;
        means.push(est.mean);
        stderrs.push(est.stderr);
    }
    ExitCurve::new(radii.to_vec(), means, stderrs, "bm_exit_mc")
}

/// Tuning knobs for the fractional-Brownian crossing experiment.
#[derive(Debug, Clone, Copy)]
pub struct FbmWalkParams {
    /// Grid steps per expected crossing duration (`dt = r^{1/H} / S`).
    pub steps_per_crossing: usize,
    pub n_paths: usize,
    pub anchors_per_path: usize,
}

impl Default for FbmWalkParams {
    fn default() -> Self {
        FbmWalkParams {
            steps_per_crossing: 100,
            n_paths: 100,
            anchors_per_path: 10,
        }
    }
}

/// Default radius bands per Hurst exponent.
///
/// The sup-ball time leg caps at `r` while the value leg scales like
/// `r^{1/H}`; the cap's share of anchors decays like `r^{1 - 1/H}`, which is
/// slow for `H` near 1, so rougher bands start higher than smooth ones.
pub fn fbm_default_radii(h: f64) -> Vec<f64> {
    let base = if h <= 0.5 { 0.2 } else { 0.02 };
    (0..5).map(|k| base * 0.5f64.sqrt().powi(k)).collect()
}

/// Crossing-time curves of an fBM graph: the leg product plus the two legs
/// separately.
#[derive(Debug, Clone, Serialize)]
pub struct FbmCrossingCurves {
    pub hurst: f64,
    pub product: ExitCurve,
    pub plus: ExitCurve,
    pub minus: ExitCurve,
    /// Anchors dropped because a scan was censored at the path boundary.
    pub rejected: usize,
}

/// Estimates sup-ball crossing curves on the graph of fBM with Hurst
/// exponent `h`.
///
/// Every radius gets its own grid with `dt = r^{1/H}/S` and horizon `4r`;
/// by self-similarity the discretization bias is then a constant factor
/// across radii and drops out of the log-log slopes. Anchors are drawn
/// uniformly from the middle half of each path, so the `±r` time caps stay
/// inside the sampled horizon.
pub fn fbm_graph_walk_curve(
    h: f64,
    radii: &[f64],
    params: FbmWalkParams,
    spec: RngSpec,
) -> Result<FbmCrossingCurves> {
    if radii.len() < 2 {
        return Err(Error::NotEnoughData("need ≥ 2 radii".into()));
    }
    let mut prod_means = Vec::new();
    let mut prod_ses = Vec::new();
    let mut plus_means = Vec::new();
    let mut plus_ses = Vec::new();
    let mut minus_means = Vec::new();
    let mut minus_ses = Vec::new();
    let mut rejected = 0usize;
    for (ri, &r) in radii.iter().enumerate() {
        let horizon = 4.0 * r;
        let dt_req = r.powf(1.0 / h) / params.steps_per_crossing as f64;
        let n = (horizon / dt_req).ceil() as usize;
        if n > MAX_CIRCULANT {
            return Err(Error::InvalidParameter(format!(
                "radius {r} needs {n} grid steps, above the {MAX_CIRCULANT} cap"
            )));
        }
        let per_path: Vec<(Vec<f64>, Vec<f64>, Vec<f64>, usize)> = (0..params.n_paths)
            .into_par_iter()
            .map(|p| {
                let mut rng = spec.task_rng((ri * params.n_paths + p) as u64);
                let path = sample_fbm(h, n, horizon, &mut rng, FbmMethod::Circulant)
                    .expect("validated fBM parameters");
                let mut prods = Vec::new();
                let mut pluses = Vec::new();
                let mut minuses = Vec::new();
                let mut bad = 0usize;
                for _ in 0..params.anchors_per_path {
                    let k = rand::Rng::gen_range(&mut rng, n / 4..3 * n / 4);
                    let c = crossing_times(&path, k, r).expect("in-range anchor");
                    if c.censored() {
                        bad += 1;
                        continue;
                    }
                    prods.push(c.product());
                    pluses.push(c.leg_plus());
                    minuses.push(c.leg_minus());
                }
                (prods, pluses, minuses, bad)
            })
            .collect();
        let mut prods = Vec::new();
        let mut pluses = Vec::new();
        let mut minuses = Vec::new();
        for (p, pl, mn, bad) in per_path {
            prods.extend(p);
            pluses.extend(pl);
            minuses.extend(mn);
            rejected += bad;
        }
        let (pm, pse) = mean_stderr(&prods)?;
        let (plm, plse) = mean_stderr(&pluses)?;
        let (mnm, mnse) = mean_stderr(&minuses)?;
        prod_means.push(pm);
        prod_ses.push(pse);
        plus_means.push(plm);
        plus_ses.push(plse);
        minus_means.push(mnm);
        minus_ses.push(mnse);
    }
    Ok(FbmCrossingCurves {
        hurst: h,
        product: ExitCurve::new(radii.to_vec(), prod_means, prod_ses, "fbm_crossing_product")?,
        plus: ExitCurve::new(radii.to_vec(), plus_means, plus_ses, "fbm_crossing_plus")?,
        minus: ExitCurve::new(radii.to_vec(), minus_means, minus_ses, "fbm_crossing_minus")?,
        rejected,
    })
}

/// Estimated pathwise regularity from mean window oscillations.
#[derive(Debug, Clone, Serialize)]
pub enum HolderEstimate {
    /// Slope of `log osc(w)` against `log w`.
    Exponent(LineFit),
    /// The path is constant; every oscillation vanishes.
    Constant,
}

/// Fits the mean oscillation of `path` over dyadic windows against the window
/// length. For an `H`-Hölder path the slope estimates `H`.
pub fn holder_regularity(path: &PathSample) -> Result<HolderEstimate> {
    let n = path.values.len() - 1;
    if n < 128 {
        return Err(Error::NotEnoughData("need ≥ 128 path steps".into()));
    }
    let vmin = path.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let vmax = path.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if vmax - vmin == 0.0 {
        return Ok(HolderEstimate::Constant);
    }
    let mut widths = Vec::new();
    let mut oscs = Vec::new();
    for k in 2..=6 {
        let w = n >> k;
        let mut total = 0.0;
        let mut count = 0usize;
        let mut start = 0;
        while start + w <= n {
            let window = &path.values[start..=start + w];
            let lo = window.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = window.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            total += hi - lo;
            count += 1;
            start += w / 2 + 1;
        }
        widths.push(w as f64 * path.dt);
        oscs.push(total / count as f64);
    }
    Ok(HolderEstimate::Exponent(log_log_fit(&widths, &oscs)?))
}
