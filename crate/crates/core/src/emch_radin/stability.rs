//! Qualitative classification of the magnetization decay and of the
//! thermodynamic stability of the model.

use serde::Serialize;

use crate::ensembles::{moment_bound_check, CouplingDistribution};
use crate::error::{Error, Result};
use crate::numeric::fit_line;

use super::dynamics::MagnetizationTrace;
use super::kernel::{InteractionKernel, SummabilityClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DecayLabel {
    AlmostPeriodic,
    PowerLaw,
    GaussianLike,
}

impl DecayLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecayLabel::AlmostPeriodic => "ALMOST_PERIODIC",
            DecayLabel::PowerLaw => "POWER_LAW",
            DecayLabel::GaussianLike => "GAUSSIAN_LIKE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayClassification {
    pub label: DecayLabel,
    /// Slope of `log envelope` against `log t` (power-law fit).
    pub power_exponent: f64,
    /// Slope of `log envelope` against `t^2` (Gaussian fit).
    pub gaussian_rate: f64,
    /// Residuals of the two fits, relative to the spread of the data.
    pub power_residual: f64,
    pub gaussian_residual: f64,
}

/// Minimum number of samples a trace must have.
pub const MIN_TRACE_POINTS: usize = 20;
/// Recurrence threshold, as a fraction of `|delta|`.
pub const RECURRENCE_FRACTION: f64 = 0.9;

/// Labels a trace: `AlmostPeriodic` if `|f|` returns above `0.9 |delta|`
/// in the second half of the time window; otherwise the better of a
/// log-log and a log-versus-`t^2` fit to the decreasing envelope
/// (running maximum from the right), restricted to the last decade of
/// times and to points above the noise floor.
pub fn decay_classify(trace: &MagnetizationTrace) -> Result<DecayClassification> {
    let n = trace.times.len();
    if n < MIN_TRACE_POINTS || trace.values.len() != n {
        return Err(Error::InsufficientData(format!(
            "trace needs at least {MIN_TRACE_POINTS} points, got {n}"
        )));
    }
    let delta = trace.delta.abs();
    if delta == 0.0 {
        return Err(Error::invalid("trace with delta = 0 carries no signal"));
    }
    let t_max = trace.times[n - 1];
    if !(t_max > 0.0) {
        return Err(Error::InsufficientData("trace must extend to positive times".into()));
    }
    let late_peak = trace
        .times
        .iter()
        .zip(&trace.values)
        .filter(|(t, _)| **t >= 0.5 * t_max)
        .map(|(_, v)| v.abs())
        .fold(0.0, f64::max);

    let mut envelope = vec![0.0; n];
    let mut running: f64 = 0.0;
    for k in (0..n).rev() {
        running = running.max(trace.values[k].abs());
        envelope[k] = running;
    }
    let floor = |k: usize| (3.0 * trace.stderr.get(k).copied().unwrap_or(0.0)).max(1e-250);
    let window: Vec<usize> = (0..n)
        .filter(|&k| trace.times[k] >= 0.1 * t_max && trace.times[k] > 0.0 && envelope[k] > floor(k))
        .collect();
    if window.len() < 5 {
        if late_peak >= RECURRENCE_FRACTION * delta {
            return Ok(DecayClassification {
                label: DecayLabel::AlmostPeriodic,
                power_exponent: 0.0,
                gaussian_rate: 0.0,
                power_residual: 0.0,
                gaussian_residual: 0.0,
            });
        }
        return Err(Error::InsufficientData("too few points above the noise floor".into()));
    }
    let ly: Vec<f64> = window.iter().map(|&k| envelope[k].ln()).collect();
    let lt: Vec<f64> = window.iter().map(|&k| trace.times[k].ln()).collect();
    let t2: Vec<f64> = window.iter().map(|&k| trace.times[k].powi(2)).collect();
    let spread = {
        let mean = ly.iter().sum::<f64>() / ly.len() as f64;
        (ly.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / ly.len() as f64).sqrt()
    };
    let power = fit_line(&lt, &ly).ok_or_else(|| Error::InsufficientData("degenerate time grid".into()))?;
    let gauss = fit_line(&t2, &ly).ok_or_else(|| Error::InsufficientData("degenerate time grid".into()))?;
    let scale = spread.max(1e-300);
    let (power_residual, gaussian_residual) = (power.rms_residual / scale, gauss.rms_residual / scale);
    let label = if late_peak >= RECURRENCE_FRACTION * delta {
        DecayLabel::AlmostPeriodic
    } else if gaussian_residual < power_residual {
        DecayLabel::GaussianLike
    } else {
        DecayLabel::PowerLaw
    };
    Ok(DecayClassification {
        label,
        power_exponent: power.slope,
        gaussian_rate: gauss.slope,
        power_residual,
        gaussian_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    /// Free energy per site bounded below.
    pub stable: bool,
    /// `H_V` bounded below for every realization.
    pub first_kind: bool,
    /// `H_V >= -c |V|`.
    pub second_kind: bool,
    /// The single-site physical Hamiltonian is semibounded, which rules
    /// out exponential decay of the magnetization.
    pub exponential_decay_excluded: bool,
    pub summability: SummabilityClass,
    pub rationale: String,
}

/// Stability flags from the kernel's summability and the support of the
/// coupling law.
pub fn stability_classify(kernel: &InteractionKernel, dist: &CouplingDistribution) -> Result<StabilityReport> {
    let summability = kernel.summability_class();
    let bounded = dist.has_bounded_support();
    let moments_ok = moment_bound_check(dist, 20)?.minimal_c.is_finite();
    let first_kind = bounded;
    let second_kind = bounded && summability == SummabilityClass::L1;
    let stable = moments_ok && summability != SummabilityClass::None;
    let mut rationale = vec![format!("kernel summability {}", summability.as_str())];
    rationale.push(if bounded {
        format!("{} couplings are bounded", dist.name())
    } else {
        format!("{} couplings are unbounded, so H_V is not bounded below", dist.name())
    });
    if second_kind {
        rationale.push("semibounded single-site Hamiltonian: no exponential decay".into());
    } else if bounded {
        rationale.push("kernel not summable: energy per site not uniformly bounded".into());
    }
    if stable {
        rationale.push("square-summable kernel and moment condition: free energy per site bounded".into());
    }
    Ok(StabilityReport {
        stable,
        first_kind,
        second_kind,
        exponential_decay_excluded: second_kind,
        summability,
        rationale: rationale.join("; "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emch_radin::dynamics::{closed_form_trace, mc_average_f, DisorderedEmchModel};
    use crate::numeric::linear_grid;

    fn model(dist: CouplingDistribution, d: usize) -> DisorderedEmchModel {
        DisorderedEmchModel {
            kernel: InteractionKernel::nearest_neighbor(d).unwrap(),
            distribution: dist,
            beta_coupling: 1.0,
            gamma: 1.0,
            volume_half_width: 1,
        }
    }

    #[test]
    fn closed_forms_get_their_labels() {
        let times = linear_grid(0.0, 10.0, 400);
        let b = closed_form_trace(&model(CouplingDistribution::Bernoulli, 2), &times).unwrap();
        assert_eq!(decay_classify(&b).unwrap().label, DecayLabel::AlmostPeriodic);
        let g = closed_form_trace(&model(CouplingDistribution::gaussian(), 2), &times).unwrap();
        let gc = decay_classify(&g).unwrap();
        assert_eq!(gc.label, DecayLabel::GaussianLike);
        assert!((gc.gaussian_rate + 4.0).abs() < 1e-6);
        let long = linear_grid(0.0, 60.0, 3000);
        for z_half in [1usize, 2, 3] {
            let u = closed_form_trace(&model(CouplingDistribution::Uniform, z_half), &long).unwrap();
            let uc = decay_classify(&u).unwrap();
            let z = 2.0 * z_half as f64;
            assert_eq!(uc.label, DecayLabel::PowerLaw);
            assert!((uc.power_exponent + z).abs() < 0.15 * z, "z={z} exponent {}", uc.power_exponent);
        }
    }

    #[test]
    fn monte_carlo_traces_classify_like_closed_forms() {
        let times = linear_grid(0.0, 10.0, 200);
        let b = mc_average_f(&model(CouplingDistribution::Bernoulli, 1), &times, 200, 1).unwrap();
        assert_eq!(decay_classify(&b).unwrap().label, DecayLabel::AlmostPeriodic);
    }

    #[test]
    fn short_trace_is_rejected() {
        let times = linear_grid(0.0, 1.0, 5);
        let t = closed_form_trace(&model(CouplingDistribution::Uniform, 1), &times).unwrap();
        assert!(decay_classify(&t).is_err());
    }

    #[test]
    fn stability_examples() {
        let nn = InteractionKernel::nearest_neighbor(2).unwrap();
        let r = stability_classify(&nn, &CouplingDistribution::Bernoulli).unwrap();
        assert!(r.second_kind && r.first_kind && r.stable && r.exponential_decay_excluded);
        let g = stability_classify(&nn, &CouplingDistribution::gaussian()).unwrap();
        assert!(!g.first_kind && !g.second_kind && !g.exponential_decay_excluded);
        assert!(g.stable);
        let slow = InteractionKernel::power_law(1, 1.0, 0.75).unwrap();
        let u = stability_classify(&slow, &CouplingDistribution::Uniform).unwrap();
        assert!(!u.second_kind && u.first_kind && u.stable);
        assert_eq!(u.summability, SummabilityClass::L2Only);
        let none = InteractionKernel::power_law(1, 1.0, 0.25).unwrap();
        assert!(!stability_classify(&none, &CouplingDistribution::Uniform).unwrap().stable);
    }

    #[test]
    fn hierarchy_holds() {
        let kernels = [
            InteractionKernel::nearest_neighbor(1).unwrap(),
            InteractionKernel::power_law(2, 1.0, 3.0).unwrap(),
            InteractionKernel::power_law(1, 1.0, 0.75).unwrap(),
        ];
        for k in &kernels {
            for d in [CouplingDistribution::Bernoulli, CouplingDistribution::Uniform, CouplingDistribution::gaussian()] {
                let r = stability_classify(k, &d).unwrap();
                assert!(!r.second_kind || r.first_kind);
            }
        }
    }
}
