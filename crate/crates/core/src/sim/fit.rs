use serde::Serialize;

use super::config::MIN_SAMPLES;
use super::evolve::EnergySeries;
use crate::error::{Error, Result};

/// Fits below this coefficient of determination are rejected.
pub const MIN_R_SQUARED: f64 = 0.99;
/// Series whose RMS spread is below this fraction of their mean count as flat.
pub const FLAT_TOLERANCE: f64 = 1e-11;

/// Ordinary least-squares line `energy ≈ intercept + slope·t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatingFit {
    pub slope: f64,
    pub std_error: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(t: &[f64], y: &[f64]) -> Result<HeatingFit> {
    let n = t.len();
    if n != y.len() || n < 3 {
        return Err(Error::Validation(format!(
            "linear fit needs matching series of at least 3 points, got {} and {}",
            t.len(),
            y.len()
        )));
    }
    let nf = n as f64;
    let t_mean = t.iter().sum::<f64>() / nf;
    let y_mean = y.iter().sum::<f64>() / nf;
    let stt: f64 = t.iter().map(|ti| (ti - t_mean).powi(2)).sum();
    if !(stt > 0.0) {
        return Err(Error::Validation("time samples are all equal".into()));
    }
    let sty: f64 = t
        .iter()
        .zip(y)
        .map(|(ti, yi)| (ti - t_mean) * (yi - y_mean))
        .sum();
    let syy: f64 = y.iter().map(|yi| (yi - y_mean).powi(2)).sum();
    let slope = sty / stt;
    let intercept = y_mean - slope * t_mean;
    let residual: f64 = t
        .iter()
        .zip(y)
        .map(|(ti, yi)| (yi - intercept - slope * ti).powi(2))
        .sum();
    // a series flat to roundoff is fitted perfectly by a flat line
    let flat = syy.sqrt() <= FLAT_TOLERANCE * y_mean.abs() * nf.sqrt();
    let r_squared = if syy > 0.0 && !flat {
        1.0 - residual / syy
    } else {
        1.0
    };
    let std_error = (residual / (nf - 2.0) / stt).sqrt();
    Ok(HeatingFit {
        slope,
        std_error,
        intercept,
        r_squared,
    })
}

/// Slope of `⟨H⟩(t)`; fails on short series or visibly nonlinear growth.
pub fn measure_heating_rate(series: &EnergySeries) -> Result<HeatingFit> {
    if series.samples.len() < MIN_SAMPLES {
        return Err(Error::Validation(format!(
            "need at least {MIN_SAMPLES} samples to fit a heating rate, got {}",
            series.samples.len()
        )));
    }
    let t: Vec<f64> = series.samples.iter().map(|s| s.t).collect();
    let e: Vec<f64> = series.samples.iter().map(|s| s.energy).collect();
    let fit = linear_fit(&t, &e)?;
    if fit.r_squared < MIN_R_SQUARED {
        return Err(Error::NonlinearHeating {
            r_squared: fit.r_squared,
        });
    }
    Ok(fit)
}
