//! Uniform Hölder (UαH) scaling of atomic measures.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::fit_line;

use super::measure::AtomicMeasure;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderReport {
    /// Fitted exponent, clamped to [0, 1].
    pub alpha: f64,
    /// Smallest `C` with `max mass(s) <= C s^alpha` on the tested scales.
    pub holder_constant: f64,
    pub scales_tested: Vec<f64>,
    pub max_masses: Vec<f64>,
    /// A single atom carries all the mass.
    pub degenerate: bool,
}

/// Largest mass of an interval of length `scale`, over windows sliding
/// with stride `scale / 4`.
pub fn max_window_mass(mu: &AtomicMeasure, scale: f64) -> f64 {
    let (Some(&lo), Some(&hi)) = (mu.support().first(), mu.support().last()) else {
        return 0.0;
    };
    let stride = scale / 4.0;
    let start = lo - scale;
    let steps = ((hi - start) / stride).ceil() as usize + 1;
    (0..=steps)
        .map(|k| {
            let a = start + k as f64 * stride;
            mu.interval_mass(a, a + scale)
        })
        .fold(0.0, f64::max)
}

fn validate_scales(scales: &[f64]) -> Result<()> {
    if scales.len() < 3 {
        return Err(Error::InsufficientData("Hölder estimate needs at least 3 scales".into()));
    }
    if scales.iter().any(|&s| !(s > 0.0 && s < 1.0)) {
        return Err(Error::invalid("scales must lie in (0, 1)"));
    }
    Ok(())
}

/// Fits `alpha` as the slope of `log max-mass(s)` against `log s`.
pub fn holder_estimate(mu: &AtomicMeasure, scales: &[f64]) -> Result<HolderReport> {
    validate_scales(scales)?;
    let mass = mu.mass();
    let max_masses: Vec<f64> = scales.iter().map(|&s| max_window_mass(mu, s)).collect();
    let degenerate = mu.weights().iter().filter(|&&w| w > 0.0).count() <= 1;
    let alpha = if degenerate {
        0.0
    } else {
        let lx: Vec<f64> = scales.iter().map(|s| s.ln()).collect();
        let ly: Vec<f64> = max_masses.iter().map(|m| m.max(f64::MIN_POSITIVE).ln()).collect();
        fit_line(&lx, &ly)
            .ok_or_else(|| Error::invalid("scales must be distinct"))?
            .slope
            .clamp(0.0, 1.0)
    };
    let holder_constant = scales
        .iter()
        .zip(&max_masses)
        .map(|(s, m)| m / s.powf(alpha))
        .fold(if degenerate { mass } else { 0.0 }, f64::max);
    Ok(HolderReport {
        alpha,
        holder_constant,
        scales_tested: scales.to_vec(),
        max_masses,
        degenerate,
    })
}

/// Local scaling exponent of `mu` at `lambda`: slope of
/// `log mu([lambda - s, lambda + s])` against `log s`. Returns 0 when
/// the windows carry no mass.
pub fn local_dimension(mu: &AtomicMeasure, lambda: f64, scales: &[f64]) -> Result<f64> {
    validate_scales(scales)?;
    let masses: Vec<f64> = scales
        .iter()
        .map(|&s| mu.interval_mass(lambda - s, lambda + s))
        .collect();
    if masses.iter().any(|&m| m <= 0.0) {
        return Ok(0.0);
    }
    let lx: Vec<f64> = scales.iter().map(|s| s.ln()).collect();
    let ly: Vec<f64> = masses.iter().map(|m| m.ln()).collect();
    Ok(fit_line(&lx, &ly)
        .ok_or_else(|| Error::invalid("scales must be distinct"))?
        .slope
        .clamp(0.0, 1.0))
}

/// `2^{-k}` for `k = first..=last`.
pub fn dyadic_scales(first: u32, last: u32) -> Vec<f64> {
    (first..=last).map(|k| 0.5f64.powi(k as i32)).collect()
}
