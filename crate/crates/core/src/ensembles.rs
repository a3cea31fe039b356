//! Centered coupling distributions: Bernoulli on {-1, +1}, uniform on
//! [-1, 1] and a Gaussian whose default density is `exp(-x^2)/sqrt(pi)`.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Variance of the Gaussian density `exp(-x^2)/sqrt(pi)`.
pub const DEFAULT_GAUSSIAN_VARIANCE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CouplingDistribution {
    Bernoulli,
    Uniform,
    Gaussian { variance: f64 },
}

impl CouplingDistribution {
    /// The Gaussian with density `exp(-x^2)/sqrt(pi)`, i.e. variance 1/2.
    pub fn gaussian() -> Self {
        CouplingDistribution::Gaussian {
            variance: DEFAULT_GAUSSIAN_VARIANCE,
        }
    }

    pub fn gaussian_with_variance(variance: f64) -> Result<Self> {
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::invalid(format!(
                "gaussian variance must be positive, got {variance}"
            )));
        }
        Ok(CouplingDistribution::Gaussian { variance })
    }

    /// Parses `bernoulli`, `uniform` or `gaussian` (variance 1/2).
    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "bernoulli" => Ok(Self::Bernoulli),
            "uniform" => Ok(Self::Uniform),
            "gaussian" => Ok(Self::gaussian()),
            other => Err(Error::invalid(format!(
                "unknown distribution '{other}' (expected bernoulli, uniform or gaussian)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Bernoulli => "bernoulli",
            Self::Uniform => "uniform",
            Self::Gaussian { .. } => "gaussian",
        }
    }

    pub fn has_bounded_support(&self) -> bool {
        !matches!(self, Self::Gaussian { .. })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Bernoulli => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Self::Uniform => 2.0 * rng.random::<f64>() - 1.0,
            Self::Gaussian { variance } => Normal::new(0.0, variance.sqrt())
                .expect("variance validated at construction")
                .sample(rng),
        }
    }

    /// `E[cos(sJ)]`, the (real, since every law here is symmetric)
    /// characteristic function.
    pub fn char_function(&self, s: f64) -> f64 {
        match *self {
            Self::Bernoulli => s.cos(),
            Self::Uniform => crate::numeric::sinc(s),
            Self::Gaussian { variance } => (-0.5 * variance * s * s).exp(),
        }
    }

    /// Exact moment `E[J^n]`.
    pub fn moment(&self, n: u32) -> f64 {
        if n % 2 == 1 {
            return 0.0;
        }
        match *self {
            Self::Bernoulli => 1.0,
            Self::Uniform => 1.0 / (n as f64 + 1.0),
            Self::Gaussian { variance } => {
                // (n-1)!! * sigma^n
                let mut m = 1.0;
                let mut k = n as i64 - 1;
                while k > 1 {
                    m *= k as f64;
                    k -= 2;
                }
                m * variance.powf(n as f64 / 2.0)
            }
        }
    }

    fn ln_abs_moment(&self, n: u32) -> Option<f64> {
        if n % 2 == 1 {
            return None;
        }
        Some(match *self {
            Self::Bernoulli => 0.0,
            Self::Uniform => -(n as f64 + 1.0).ln(),
            Self::Gaussian { variance } => {
                let odd: f64 = (1..n).step_by(2).map(|k| (k as f64).ln()).sum();
                odd + 0.5 * n as f64 * variance.ln()
            }
        })
    }
}

/// Result of checking `|E J^n| <= n! c^n` for `n = 2..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentBound {
    /// Smallest `c` for which the bound holds at every tested order.
    pub minimal_c: f64,
    /// Order at which the bound is tight.
    pub binding_order: u32,
}

pub fn moment_bound_check(dist: &CouplingDistribution, n_max: u32) -> Result<MomentBound> {
    if n_max < 2 {
        return Err(Error::invalid("moment check needs n_max >= 2"));
    }
    let mut best = MomentBound {
        minimal_c: 0.0,
        binding_order: 2,
    };
    let mut ln_fact = (2.0f64).ln();
    for n in 2..=n_max {
        if n > 2 {
            ln_fact += (n as f64).ln();
        }
        if let Some(ln_m) = dist.ln_abs_moment(n) {
            let c = ((ln_m - ln_fact) / n as f64).exp();
            if c > best.minimal_c {
                best = MomentBound {
                    minimal_c: c,
                    binding_order: n,
                };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::Streams;
    use statrs::distribution::{ContinuousCDF, Normal as NormalCdf};

    fn draws(dist: CouplingDistribution, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = Streams::new(seed).stream("ensemble-test", 0);
        (0..n).map(|_| dist.sample(&mut rng)).collect()
    }

    fn moment_z(xs: &[f64], power: i32, exact: f64) -> f64 {
        let vals: Vec<f64> = xs.iter().map(|x| x.powi(power)).collect();
        let (m, se) = crate::numeric::mean_stderr(&vals);
        if se == 0.0 {
            (m - exact).abs()
        } else {
            (m - exact).abs() / se
        }
    }

    #[test]
    fn bernoulli_is_centered() {
        let xs = draws(CouplingDistribution::Bernoulli, 1_000_000, 1);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 3e-3, "mean {mean}");
    }

    #[test]
    fn second_moments_match_densities() {
        let xs = draws(CouplingDistribution::Uniform, 1_000_000, 2);
        assert!(moment_z(&xs, 2, 1.0 / 3.0) < 3.0);
        let xs = draws(CouplingDistribution::gaussian(), 1_000_000, 3);
        assert!(moment_z(&xs, 2, 0.5) < 3.0);
    }

    #[test]
    fn sampled_odd_moments_vanish() {
        for (k, d) in [
            CouplingDistribution::Bernoulli,
            CouplingDistribution::Uniform,
            CouplingDistribution::gaussian(),
        ]
        .into_iter()
        .enumerate()
        {
            let xs = draws(d, 200_000, 10 + k as u64);
            for p in [1, 3] {
                assert_eq!(d.moment(p as u32), 0.0);
                assert!(moment_z(&xs, p, 0.0) < 3.0, "{d:?} power {p}");
            }
        }
    }

    // 50 equiprobable-width bins over the bulk, chi-square at the 1% level.
    fn chi_square(xs: &[f64], lo: f64, hi: f64, cdf: impl Fn(f64) -> f64) -> f64 {
        let bins = 50;
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins + 2];
        for &x in xs {
            let idx = if x < lo {
                0
            } else if x >= hi {
                bins + 1
            } else {
                1 + (((x - lo) / width) as usize).min(bins - 1)
            };
            counts[idx] += 1;
        }
        let n = xs.len() as f64;
        let mut edges = vec![f64::NEG_INFINITY];
        edges.extend((0..=bins).map(|k| lo + k as f64 * width));
        edges.push(f64::INFINITY);
        let mut chi2 = 0.0;
        for (b, &c) in counts.iter().enumerate() {
            let p = cdf(edges[b + 1]) - cdf(edges[b]);
            if p * n < 1e-9 {
                assert_eq!(c, 0);
                continue;
            }
            chi2 += (c as f64 - n * p).powi(2) / (n * p);
        }
        chi2
    }

    #[test]
    fn histograms_pass_chi_square() {
        // chi-square(49) 99th percentile is 74.92; the tails add two cells
        // for the Gaussian (51 dof, 77.39).
        let xs = draws(CouplingDistribution::Uniform, 100_000, 4);
        let chi = chi_square(&xs, -1.0, 1.0, |x| ((x + 1.0) / 2.0).clamp(0.0, 1.0));
        assert!(chi < 74.92, "uniform chi2 {chi}");

        let g = NormalCdf::new(0.0, 0.5f64.sqrt()).unwrap();
        let xs = draws(CouplingDistribution::gaussian(), 100_000, 5);
        let chi = chi_square(&xs, -2.0, 2.0, |x| g.cdf(x));
        assert!(chi < 77.39, "gaussian chi2 {chi}");

        let xs = draws(CouplingDistribution::Bernoulli, 100_000, 6);
        let plus = xs.iter().filter(|&&x| x == 1.0).count() as f64;
        let chi = 2.0 * (plus - 50_000.0).powi(2) / 50_000.0;
        assert!(chi < 6.635, "bernoulli chi2 {chi}");
    }

    #[test]
    fn char_function_values() {
        use std::f64::consts::PI;
        for d in [
            CouplingDistribution::Bernoulli,
            CouplingDistribution::Uniform,
            CouplingDistribution::gaussian(),
        ] {
            assert_eq!(d.char_function(0.0), 1.0);
            for s in [0.3, 1.7, 12.0] {
                assert_eq!(d.char_function(s), d.char_function(-s));
            }
        }
        assert!((CouplingDistribution::Bernoulli.char_function(PI) + 1.0).abs() < 1e-15);
        assert!(CouplingDistribution::Uniform.char_function(PI).abs() < 1e-15);
        assert!((CouplingDistribution::gaussian().char_function(2.0) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn moment_bounds() {
        let b = moment_bound_check(&CouplingDistribution::Bernoulli, 10).unwrap();
        assert!(b.minimal_c <= 1.0);
        let u = moment_bound_check(&CouplingDistribution::Uniform, 10).unwrap();
        assert!(u.minimal_c <= 1.0);

        // Oracle: (n-1)!! 2^{-n/2} / n! = 2^{-n/2} / n!! for even n, with
        // n!! built by its own recursion.
        let mut oracle_c: f64 = 0.0;
        let mut even_double_fact = 1.0;
        for n in (2..=20u32).step_by(2) {
            even_double_fact *= n as f64;
            let ratio = 2f64.powf(-(n as f64) / 2.0) / even_double_fact;
            oracle_c = oracle_c.max(ratio.powf(1.0 / n as f64));
        }
        let g = moment_bound_check(&CouplingDistribution::gaussian(), 20).unwrap();
        assert!((g.minimal_c - oracle_c).abs() < 1e-12, "c = {}", g.minimal_c);
        assert!((g.minimal_c - 0.5).abs() < 1e-12);
        assert_eq!(g.binding_order, 2);
    }

    #[test]
    fn exact_moments() {
        assert_eq!(CouplingDistribution::Uniform.moment(4), 0.2);
        assert!((CouplingDistribution::gaussian().moment(4) - 0.75).abs() < 1e-15);
        assert!(moment_bound_check(&CouplingDistribution::Bernoulli, 1).is_err());
        assert!(CouplingDistribution::gaussian_with_variance(0.0).is_err());
    }
}
