//! Monte Carlo estimation of Brownian exit times from metric balls.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spaces::{distance, Point, SpaceDescriptor};
use crate::stats::mean_stderr;
use crate::stoch::RngSpec;

/// Hard cap on Euler steps per path before a path counts as censored.
const MAX_STEPS: usize = 10_000_000;

/// Largest tolerated fraction of censored paths.
const MAX_CENSORED_FRACTION: f64 = 0.01;

/// A Monte Carlo mean with its uncertainty and attrition accounting.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    /// Paths that actually exited and entered the mean.
    pub n_effective: usize,
    /// Paths dropped at the step cap.
    pub censored: usize,
}

/// Expected exit time of standard Brownian motion started at `start` from the
/// metric ball of radius `r`, by the Euler scheme with step `dt`.
///
/// Each path draws from its own RNG stream, so the estimate is independent of
/// thread scheduling. Requires `dt ≤ r²/100` and at least 100 paths; errors
/// out if more than 1% of paths fail to exit within the step cap.
pub fn bm_exit_time_mc(
    space: &SpaceDescriptor,
    start: &Point,
    r: f64,
    dt: f64,
    n_paths: usize,
    spec: RngSpec,
) -> Result<McEstimate> {
    bm_exit_time_mc_frozen(space, start, r, dt, n_paths, spec, &[])
}

/// Like [`bm_exit_time_mc`] but with the listed coordinates frozen at their
/// start value: the diffusion runs only in the remaining coordinates. Used
/// for degenerate diffusions such as `t ↦ (0, W_t)`.
pub fn bm_exit_time_mc_frozen(
    space: &SpaceDescriptor,
    start: &Point,
    r: f64,
    dt: f64,
    n_paths: usize,
    spec: RngSpec,
    frozen: &[usize],
) -> Result<McEstimate> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("bad radius {r}")));
    }
    if !(dt > 0.0) || dt > r * r / 100.0 {
        return Err(Error::InvalidParameter(format!(
            "Euler step {dt} too coarse for radius {r}; need dt ≤ r²/100"
        )));
    }
    if n_paths < 100 {
        return Err(Error::NotEnoughData(format!(
            "need ≥ 100 paths, got {n_paths}"
        )));
    }
    // validate start against the space once up front
    distance(space, start, start)?;
    if frozen.iter().any(|&i| i >= start.dim()) {
        return Err(Error::InvalidParameter("frozen coordinate out of range".into()));
    }

    let sqrt_dt = dt.sqrt();
    let times: Vec<Option<f64>> = (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = spec.task_rng(p as u64);
            let mut coords = start.coords().to_vec();
            for step in 1..=MAX_STEPS {
                for (i, c) in coords.iter_mut().enumerate() {
                    if !frozen.contains(&i) {
                        let z: f64 = rng.sample(StandardNormal);
                        *c += sqrt_dt * z;
                    }
                }
                let here = Point::new(coords.clone()).expect("finite Euler state");
                let d = distance(space, start, &here).expect("validated space");
                if d >= r {
                    return Some(step as f64 * dt);
                }
            }
            None
        })
        .collect();

    let exits: Vec<f64> = times.iter().filter_map(|t| *t).collect();
    let censored = n_paths - exits.len();
    if (censored as f64) > MAX_CENSORED_FRACTION * n_paths as f64 {
        return Err(Error::Censored(format!(
            "{censored} of {n_paths} paths failed to exit within the step cap"
        )));
    }
    let (mean, stderr) = mean_stderr(&exits)?;
    Ok(McEstimate {
        mean,
        stderr,
        n_effective: exits.len(),
        censored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn estimate(space: &SpaceDescriptor, start: Point, r: f64, seed: u64) -> McEstimate {
        bm_exit_time_mc(space, &start, r, 3e-5 * r * r, 2000, RngSpec::new(seed)).unwrap()
    }

    #[test]
    fn interval_exit_from_center() {
        // E[τ] for 1-d BM exiting (−r, r) from 0 is r²
        let s = SpaceDescriptor::Euclidean { dim: 1 };
        for &r in &[0.5, 1.0] {
            let est = estimate(&s, Point::one(0.0), r, 21);
            let target = r * r;
            assert!(
                (est.mean - target).abs() < 4.0 * est.stderr + 0.015 * target,
                "r = {r}: mean {} vs {target} (se {})",
                est.mean,
                est.stderr
            );
        }
    }

    #[test]
    fn disk_exit_from_center() {
        // E[τ] for 2-d BM exiting the disk of radius r from the center: r²/2
        let s = SpaceDescriptor::Euclidean { dim: 2 };
        let r = 1.0;
        let est = estimate(&s, Point::two(0.0, 0.0), r, 22);
        let target = r * r / 2.0;
        assert!((est.mean - target).abs() < 4.0 * est.stderr + 0.015 * target);
    }

    #[test]
    fn off_center_interval_start() {
        // ball of radius r around x0 on the line is just (x0−r, x0+r)
        let s = SpaceDescriptor::Euclidean { dim: 1 };
        let est = estimate(&s, Point::one(3.0), 0.8, 23);
        let target = 0.64;
        assert!((est.mean - target).abs() < 4.0 * est.stderr + 0.015 * target);
    }

    #[test]
    fn arctan_ball_is_a_tan_interval() {
        // the arctan ball of radius r around 0 pulls back to (−tan r, tan r),
        // so the expected exit time is tan(r)²
        let s = SpaceDescriptor::ArctanLine;
        let r = 0.3f64;
        let est = estimate(&s, Point::one(0.0), r, 24);
        let target = r.tan() * r.tan();
        assert!(
            (est.mean - target).abs() < 4.0 * est.stderr + 0.015 * target,
            "mean {} vs {target}",
            est.mean
        );
    }

    #[test]
    fn frozen_coordinate_reduces_to_line() {
        // (0, W_t) in the plane: Euclidean exit is the 1-d exit
        let s = SpaceDescriptor::Euclidean { dim: 2 };
        let r = 0.6;
        let est = bm_exit_time_mc_frozen(
            &s,
            &Point::two(0.0, 0.0),
            r,
            3e-5 * r * r,
            2000,
            RngSpec::new(25),
            &[0],
        )
        .unwrap();
        let target = r * r;
        assert!((est.mean - target).abs() < 4.0 * est.stderr + 0.015 * target);
    }

    #[test]
    fn deterministic_across_calls() {
        let s = SpaceDescriptor::Euclidean { dim: 1 };
        let a = bm_exit_time_mc(&s, &Point::one(0.0), 0.5, 1e-4, 200, RngSpec::new(3)).unwrap();
        let b = bm_exit_time_mc(&s, &Point::one(0.0), 0.5, 1e-4, 200, RngSpec::new(3)).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn rejects_coarse_steps_and_small_batches() {
        let s = SpaceDescriptor::Euclidean { dim: 1 };
        let p = Point::one(0.0);
        assert!(bm_exit_time_mc(&s, &p, 0.1, 0.01, 200, RngSpec::new(1)).is_err());
        assert!(bm_exit_time_mc(&s, &p, 0.1, 1e-5, 50, RngSpec::new(1)).is_err());
    }
}
