//! Least-squares fitting in log-log coordinates, the workhorse behind every
//! dimension estimate in this crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Result of an ordinary least-squares line fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// A dimension read off as the slope of a log-log fit over a stated window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Abscissa window the fit was restricted to, in the units of the caller
    /// (spectrum fraction for spectral fits, radius range for walk fits).
    pub window: (f64, f64),
}

impl DimensionFit {
    pub fn from_line(fit: LineFit, window: (f64, f64)) -> Self {
        DimensionFit {
            slope: fit.slope,
            intercept: fit.intercept,
            r2: fit.r2,
            window,
        }
    }
}

/// OLS fit of `y` against `x`. Degenerate inputs (constant `x`) are rejected.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "fit input lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::NotEnoughData("need at least 2 points to fit".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|&xi| (xi - mx) * (xi - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(&xi, &yi)| (xi - mx) * (yi - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("all abscissa values equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|&yi| (yi - my) * (yi - my)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let e = yi - (intercept + slope * xi);
            e * e
        })
        .sum();
    let r2 = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        // flat data: the fit is exact but carries no slope information
        1.0
    };
    Ok(LineFit { slope, intercept, r2 })
}

/// Fit `log y` against `log x`. All inputs must be strictly positive.
pub fn log_log_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.iter().chain(y).any(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "log-log fit requires strictly positive finite data".into(),
        ));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly)
}
