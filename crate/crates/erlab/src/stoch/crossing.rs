//! First crossing times of a sampled path out of sup-metric balls around an
//! anchor point on its graph.
//!
//! With anchor time `T` and radius `r`, the path's graph leaves the sup-ball
//! around `(T, X_T)` in the forward direction at
//! `Θ⁺ = min(T + r, inf{t > T : |X_t − X_T| ≥ r})`, and symmetrically at
//! `Θ⁻` going backward; the two legs multiply into the ball exit-time proxy
//! `(Θ⁺ − T)(T − Θ⁻)`.

use crate::error::{Error, Result};
use crate::stoch::PathSample;

/// Crossing legs of one anchor at one radius.
#[derive(Debug, Clone, Copy)]
pub struct CrossingTimes {
    pub anchor_time: f64,
    pub radius: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
    /// The forward scan ran off the sampled horizon before reaching either
    /// the value level or the time cap.
    pub censored_plus: bool,
    pub censored_minus: bool,
    /// `r` resolves at least ~10 typical steps of the path
    /// (`r ≥ 10 · dt^H`); crossings below that are discretization noise.
    pub reliable: bool,
}

impl CrossingTimes {
    pub fn censored(&self) -> bool {
        self.censored_plus || self.censored_minus
    }

    pub fn leg_plus(&self) -> f64 {
        self.theta_plus - self.anchor_time
    }

    pub fn leg_minus(&self) -> f64 {
        self.anchor_time - self.theta_minus
    }

    /// The product `(Θ⁺ − T)(T − Θ⁻)`.
    pub fn product(&self) -> f64 {
        self.leg_plus() * self.leg_minus()
    }
}

/// Scans outward from sample index `k` for the crossing times at radius `r`.
/// Value-level crossings are located by linear interpolation between samples.
pub fn crossing_times(path: &PathSample, k: usize, r: f64) -> Result<CrossingTimes> {
    let n = path.values.len();
    if n < 2 {
        return Err(Error::NotEnoughData("path too short".into()));
    }
    if k >= n {
        return Err(Error::InvalidParameter(format!(
            "anchor index {k} outside path of {n} samples"
        )));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("bad radius {r}")));
    }
    let dt = path.dt;
    let anchor_time = k as f64 * dt;
    let v0 = path.values[k];
    let last = n - 1;

    // forward leg
    let mut theta_plus = anchor_time + r;
    let mut censored_plus = false;
    let mut hit = false;
    let mut j = k + 1;
    while j <= last && (j as f64 * dt - anchor_time) < r {
        let f1 = (path.values[j] - v0).abs();
        if f1 >= r {
            let f0 = (path.values[j - 1] - v0).abs();
            theta_plus = (j - 1) as f64 * dt + dt * (r - f0) / (f1 - f0);
            hit = true;
            break;
        }
        j += 1;
    }
    if !hit && j > last && (last as f64 * dt - anchor_time) < r {
        censored_plus = true;
    }

    // backward leg
    let mut theta_minus = anchor_time - r;
    let mut censored_minus = false;
    hit = false;
    let mut j = k as i64 - 1;
    while j >= 0 && (anchor_time - j as f64 * dt) < r {
        let f1 = (path.values[j as usize] - v0).abs();
        if f1 >= r {
            let f0 = (path.values[j as usize + 1] - v0).abs();
            theta_minus = (j + 1) as f64 * dt - dt * (r - f0) / (f1 - f0);
            hit = true;
            break;
        }
        j -= 1;
    }
    if !hit && j < 0 && anchor_time < r {
        censored_minus = true;
    }

    let reliable = match path.hurst {
        Some(h) => r >= 10.0 * dt.powf(h),
        None => true,
    };
    Ok(CrossingTimes {
        anchor_time,
        radius: r,
        theta_plus,
        theta_minus,
        censored_plus,
        censored_minus,
        reliable,
    })
}

/// Mean of the crossing-leg product over a batch, rejecting censored anchors.
pub fn graph_exit_expectation(crossings: &[CrossingTimes]) -> Result<f64> {
    if crossings.is_empty() {
        return Err(Error::NotEnoughData("no crossings".into()));
    }
    if crossings.iter().any(|c| c.censored()) {
        return Err(Error::Censored(
            "crossing batch contains censored anchors".into(),
        ));
    }
    Ok(crossings.iter().map(|c| c.product()).sum::<f64>() / crossings.len() as f64)
}
