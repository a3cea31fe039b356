//! Fourier–Stieltjes transforms and their Cesàro (running time) averages.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Eigendecomposition;
use crate::numeric::{fit_line, pairwise_sum, sinc};

use super::measure::{spectral_measure, AtomicMeasure};

/// `sum_k w_k exp(-i lambda_k t)`.
pub fn fs_transform(mu: &AtomicMeasure, t: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &w) in mu.support().iter().zip(mu.weights()) {
        let (s, c) = (x * t).sin_cos();
        acc += Complex64::new(w * c, -w * s);
    }
    acc
}

/// `(1/T) int_0^T |mu_hat(t)|^2 dt` in closed form:
/// `sum_k w_k^2 + 2 sum_{k<l} w_k w_l sinc((lambda_k - lambda_l) T)`.
pub fn cesaro_average(mu: &AtomicMeasure, horizon: f64) -> Result<f64> {
    if !(horizon > 0.0) {
        return Err(Error::invalid(format!("horizon must be positive, got {horizon}")));
    }
    let x = mu.support();
    let w = mu.weights();
    // Row sums in index order, then a fixed reduction tree.
    let rows: Vec<f64> = (0..x.len())
        .into_par_iter()
        .map(|k| {
            let cross: f64 = (k + 1..x.len())
                .map(|l| w[l] * sinc((x[k] - x[l]) * horizon))
                .sum();
            w[k] * (w[k] + 2.0 * cross)
        })
        .collect();
    Ok(pairwise_sum(&rows).max(0.0))
}

/// Composite Simpson estimate of the same average with `grid` intervals.
pub fn cesaro_average_quadrature(mu: &AtomicMeasure, horizon: f64, grid: usize) -> Result<f64> {
    if !(horizon > 0.0) {
        return Err(Error::invalid(format!("horizon must be positive, got {horizon}")));
    }
    if grid < 100 {
        return Err(Error::invalid("quadrature grid must have at least 100 intervals"));
    }
    let n = grid + grid % 2;
    let h = horizon / n as f64;
    let vals: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let coef = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            coef * fs_transform(mu, k as f64 * h).norm_sqr()
        })
        .collect();
    Ok(pairwise_sum(&vals) * h / 3.0 / horizon)
}

/// Cesàro averages on a grid of horizons.
#[derive(Debug, Clone, PartialEq)]
pub struct CesaroSeries {
    pub horizons: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn cesaro_series(mu: &AtomicMeasure, horizons: &[f64]) -> Result<CesaroSeries> {
    if horizons.windows(2).any(|h| h[1] <= h[0]) {
        return Err(Error::invalid("horizons must be strictly increasing"));
    }
    let values = horizons
        .iter()
        .map(|&t| cesaro_average(mu, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(CesaroSeries {
        horizons: horizons.to_vec(),
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Minus the log-log slope.
    pub exponent: f64,
    pub prefactor: f64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
}

/// Least-squares power law `value ~ C T^{-exponent}`.
pub fn fit_decay_exponent(series: &CesaroSeries) -> Result<DecayFit> {
    let n = series.horizons.len();
    if n < 5 || series.values.len() != n {
        return Err(Error::InsufficientData(format!(
            "a decay fit needs at least 5 horizons, got {n}"
        )));
    }
    let (lo, hi) = (series.horizons[0], series.horizons[n - 1]);
    if !(lo > 0.0) || hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InsufficientData(
            "horizons must be positive and span at least two decades".into(),
        ));
    }
    if let Some(v) = series.values.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::invalid(format!("cannot fit a power law through value {v}")));
    }
    let lx: Vec<f64> = series.horizons.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = series.values.iter().map(|v| v.ln()).collect();
    let fit = fit_line(&lx, &ly).expect("distinct horizons");
    Ok(DecayFit {
        exponent: -fit.slope,
        prefactor: fit.intercept.exp(),
        residual: fit.rms_residual,
    })
}

/// Cesàro-averaged return probability `(1/T) int_0^T |<psi, e^{-itH} psi>|^2`.
pub fn survival_cesaro(eig: &Eigendecomposition, psi: &[f64], horizon: f64) -> Result<f64> {
    let norm2: f64 = psi.iter().map(|x| x * x).sum();
    if (norm2 - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!("initial state must be normalized, |psi|^2 = {norm2}")));
    }
    cesaro_average(&spectral_measure(eig, psi)?, horizon)
}

/// Max of `modulus(t)` over the top decade of `t_grid`: a finite-time
/// stand-in for `limsup |mu_hat(t)|`.
pub fn rajchman_indicator(t_grid: &[f64], modulus: impl Fn(f64) -> f64 + Sync) -> Result<f64> {
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("time grid must be increasing"));
    }
    let t_max = *t_grid
        .last()
        .ok_or_else(|| Error::InsufficientData("empty time grid".into()))?;
    if t_max < 1e3 {
        return Err(Error::invalid("time grid must reach at least 1e3"));
    }
    let top: Vec<f64> = t_grid.iter().copied().filter(|&t| t >= t_max / 10.0).collect();
    Ok(top
        .par_iter()
        .map(|&t| modulus(t))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max))
}

pub fn rajchman_indicator_measure(mu: &AtomicMeasure, t_grid: &[f64]) -> Result<f64> {
    rajchman_indicator(t_grid, |t| fs_transform(mu, t).norm())
}
