//! Transverse magnetization of the random Emch–Radin model.
//!
//! The Hamiltonian `H = sum_{j<k} g_jk Z_j Z_k` with
//! `g_jk = beta epsilon(j-k) J_jk` is diagonal in the computational
//! basis, and the initial state is the product of single-site states
//! `exp(-gamma X) / tr exp(-gamma X)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::CouplingDistribution;
use crate::error::{Error, Result};
use crate::numeric::{mean_stderr, pairwise_sum, sinc};
use crate::stream::Streams;

use super::kernel::InteractionKernel;

/// Largest cluster evolved exactly.
pub const EXACT_MAX_SPINS: usize = 12;
/// Largest cluster handled by the dense matrix-exponential route.
pub const DENSE_MAX_SPINS: usize = 7;

/// `<X>` in the single-site state `exp(-gamma X)/tr`: `-tanh(gamma)`.
pub fn delta_of_gamma(gamma: f64) -> f64 {
    -gamma.tanh()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderedEmchModel {
    pub kernel: InteractionKernel,
    pub distribution: CouplingDistribution,
    /// Coupling amplitude multiplying the kernel.
    pub beta_coupling: f64,
    /// Initial-state parameter.
    pub gamma: f64,
    /// The box `V_n = [-n, n]^d`.
    pub volume_half_width: usize,
}

impl DisorderedEmchModel {
    pub fn validate(&self) -> Result<()> {
        if self.gamma == 0.0 || !self.gamma.is_finite() {
            return Err(Error::invalid("gamma must be non-zero (otherwise delta = 0)"));
        }
        if !self.beta_coupling.is_finite() {
            return Err(Error::invalid("beta must be finite"));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        delta_of_gamma(self.gamma)
    }

    /// Lattice points of `V_n`, first coordinate fastest.
    pub fn volume_sites(&self) -> Vec<Vec<i64>> {
        box_sites(self.kernel.dimension, self.volume_half_width as i64)
    }

    /// Spin cluster on `V_n` with one coupling per interacting pair,
    /// pair `p` (in enumeration order) drawn from substream `p`.
    pub fn sample_cluster(&self, seed: u64) -> Result<SpinCluster> {
        self.validate()?;
        let sites = self.volume_sites();
        if sites.len() > 30 {
            return Err(Error::Budget {
                what: "cluster spins",
                requested: sites.len(),
                limit: 30,
            });
        }
        let streams = Streams::new(seed);
        let mut pairs = Vec::new();
        let mut index = 0u64;
        for j in 0..sites.len() {
            for k in j + 1..sites.len() {
                let diff: Vec<i64> = sites[j].iter().zip(&sites[k]).map(|(a, b)| a - b).collect();
                let eps = self.kernel.value(&diff);
                if eps != 0.0 {
                    let coupling = self.distribution.sample(&mut streams.stream("pair", index));
                    pairs.push((j, k, self.beta_coupling * eps * coupling));
                }
                index += 1;
            }
        }
        SpinCluster::new(sites.len(), pairs)
    }
}

fn box_sites(d: usize, n: i64) -> Vec<Vec<i64>> {
    let side = 2 * n + 1;
    (0..side.pow(d as u32))
        .map(|mut idx| {
            (0..d)
                .map(|_| {
                    let x = idx % side - n;
                    idx /= side;
                    x
                })
                .collect()
        })
        .collect()
}

/// Finite spin system with `H = sum g Z_j Z_k` over the listed pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinCluster {
    pub spins: usize,
    /// `(j, k, g_jk)` with `j < k`.
    pub pairs: Vec<(usize, usize, f64)>,
}

impl SpinCluster {
    pub fn new(spins: usize, pairs: Vec<(usize, usize, f64)>) -> Result<Self> {
        if spins == 0 {
            return Err(Error::invalid("cluster needs at least one spin"));
        }
        if pairs.iter().any(|&(j, k, g)| j >= k || k >= spins || !g.is_finite()) {
            return Err(Error::invalid("pairs must satisfy j < k < spins with finite coupling"));
        }
        Ok(SpinCluster { spins, pairs })
    }

    /// `delta * prod_{k != i0} cos(2 t g_{i0 k})`.
    pub fn product_formula(&self, gamma: f64, site: usize, t: f64) -> f64 {
        let prod: f64 = self
            .pairs
            .iter()
            .filter(|&&(j, k, _)| j == site || k == site)
            .map(|&(_, _, g)| (2.0 * t * g).cos())
            .product();
        delta_of_gamma(gamma) * prod
    }
}

fn check_site(cluster: &SpinCluster, site: usize, limit: usize) -> Result<()> {
    if site >= cluster.spins {
        return Err(Error::invalid(format!("site {site} outside the cluster")));
    }
    if cluster.spins > limit {
        return Err(Error::Budget {
            what: "spins for exact evolution",
            requested: cluster.spins,
            limit,
        });
    }
    Ok(())
}

/// `tr(rho_0 U(-t) X_site U(t))` evaluated in the computational basis,
/// where `U(t) = exp(itH)` acts by phases. The only non-zero matrix
/// elements of `rho_0` that pair with `X_site` are
/// `rho_0[s, s ^ site] = -tanh(gamma) / 2^N`.
pub fn exact_magnetization(cluster: &SpinCluster, gamma: f64, site: usize, t: f64) -> Result<f64> {
    check_site(cluster, site, EXACT_MAX_SPINS)?;
    let dim = 1usize << cluster.spins;
    let energy = |s: usize| -> f64 {
        cluster
            .pairs
            .iter()
            .map(|&(j, k, g)| if (s >> j ^ s >> k) & 1 == 0 { g } else { -g })
            .sum()
    };
    let terms: Vec<f64> = (0..dim)
        .map(|s| (t * (energy(s) - energy(s ^ (1 << site)))).cos())
        .collect();
    let off_diagonal = -gamma.tanh() / dim as f64;
    Ok(off_diagonal * pairwise_sum(&terms))
}

fn pauli_x() -> DMatrix<Complex64> {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    DMatrix::from_row_slice(2, 2, &[o, l, l, o])
}

fn pauli_z() -> DMatrix<Complex64> {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    DMatrix::from_row_slice(2, 2, &[l, o, o, -l])
}

/// `I (x) .. (x) op (x) .. (x) I` with `op` on `site`; site 0 is the
/// rightmost (least significant) factor.
fn embed(op: &DMatrix<Complex64>, site: usize, spins: usize) -> DMatrix<Complex64> {
    let id = DMatrix::<Complex64>::identity(2, 2);
    (0..spins)
        .rev()
        .map(|k| if k == site { op.clone() } else { id.clone() })
        .reduce(|acc, m| acc.kronecker(&m))
        .expect("at least one spin")
}

/// Same expectation from dense matrices: the initial state and the
/// propagator are built with matrix exponentials.
pub fn dense_magnetization(cluster: &SpinCluster, gamma: f64, site: usize, t: f64) -> Result<f64> {
    check_site(cluster, site, DENSE_MAX_SPINS)?;
    let n = cluster.spins;
    let single = (pauli_x() * Complex64::new(-gamma, 0.0)).exp();
    let single = &single / single.trace();
    let rho = (1..n).fold(single.clone(), |acc, _| acc.kronecker(&single));
    let dim = 1usize << n;
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for &(j, k, g) in &cluster.pairs {
        h += embed(&pauli_z(), j, n) * embed(&pauli_z(), k, n) * Complex64::new(g, 0.0);
    }
    let u = (h * Complex64::new(0.0, t)).exp();
    let observable = u.adjoint() * embed(&pauli_x(), site, n) * &u;
    Ok((rho * observable).trace().re)
}

/// Disorder average `[phi_J(2 beta t)]^z` without the `delta` prefactor.
pub fn closed_form_f(dist: &CouplingDistribution, z: u32, beta_coupling: f64, t: f64) -> Result<f64> {
    if z == 0 {
        return Err(Error::invalid("coordination must be at least 1"));
    }
    Ok(dist.char_function(2.0 * beta_coupling * t).powi(z as i32))
}

/// The three printed reference forms at unit coupling amplitude:
/// `cos(2t)^z`, `(sin(2t)/(2t))^z` and `exp(-2 z t^2)`. The last one is
/// the generic form for a unit-variance Gaussian, not for the density
/// `exp(-x^2)/sqrt(pi)`.
pub fn printed_form_f(dist: &CouplingDistribution, z: u32, t: f64) -> f64 {
    let zi = z as i32;
    match dist {
        CouplingDistribution::Bernoulli => (2.0 * t).cos().powi(zi),
        CouplingDistribution::Uniform => sinc(2.0 * t).powi(zi),
        CouplingDistribution::Gaussian { .. } => (-2.0 * z as f64 * t * t).exp(),
    }
}

/// Time series of the transverse magnetization or an estimate of it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagnetizationTrace {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Zero for closed forms.
    pub stderr: Vec<f64>,
    pub delta: f64,
}

fn local_factors(model: &DisorderedEmchModel) -> Result<Vec<f64>> {
    let support = model.kernel.finite_support().ok_or_else(|| {
        Error::invalid("the local product needs a kernel with finite support")
    })?;
    Ok(support.into_iter().map(|(_, e)| e).collect())
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() || times.windows(2).any(|w| w[1] <= w[0]) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("times must be finite and strictly increasing"));
    }
    Ok(())
}

/// `delta prod_k phi_J(2 beta epsilon_k t)` over the kernel support.
pub fn closed_form_trace(model: &DisorderedEmchModel, times: &[f64]) -> Result<MagnetizationTrace> {
    model.validate()?;
    check_times(times)?;
    let eps = local_factors(model)?;
    let delta = model.delta();
    let values = times
        .iter()
        .map(|&t| {
            let p: f64 = eps
                .iter()
                .map(|e| model.distribution.char_function(2.0 * model.beta_coupling * e * t))
                .product();
            delta * p
        })
        .collect();
    Ok(MagnetizationTrace {
        times: times.to_vec(),
        values,
        stderr: vec![0.0; times.len()],
        delta,
    })
}

/// Monte Carlo estimate of `delta Av(prod_k cos(2 beta epsilon_k J_k t))`.
/// Sample `s` draws its couplings from substream `s`; the same samples
/// serve every time point.
pub fn mc_average_f(
    model: &DisorderedEmchModel,
    times: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<MagnetizationTrace> {
    model.validate()?;
    check_times(times)?;
    if n_samples < 100 {
        return Err(Error::invalid("Monte Carlo average needs at least 100 samples"));
    }
    let eps = local_factors(model)?;
    let streams = Streams::new(seed);
    let amplitudes: Vec<Vec<f64>> = (0..n_samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = streams.stream("emch-sample", s as u64);
            eps.iter()
                .map(|e| 2.0 * model.beta_coupling * e * model.distribution.sample(&mut rng))
                .collect()
        })
        .collect();
    let delta = model.delta();
    let (values, stderr): (Vec<f64>, Vec<f64>) = times
        .par_iter()
        .map(|&t| {
            let products: Vec<f64> = amplitudes
                .iter()
                .map(|a| a.iter().map(|w| (w * t).cos()).product())
                .collect();
            let (mean, err) = mean_stderr(&products);
            (delta * mean, delta.abs() * err)
        })
        .unzip();
    Ok(MagnetizationTrace {
        times: times.to_vec(),
        values,
        stderr,
        delta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiniteVolumeEstimate {
    pub value: f64,
    /// From 100 contiguous blocks of sites, so neighbouring sites that
    /// share a bond do not bias the error bar.
    pub stderr: f64,
    pub sites: usize,
}

/// Spatial average over `V_n` (every `stride`-th site) of the per-site
/// product `delta prod_{+-e_i} cos(2 beta J t)` for one realization of
/// nearest-neighbour couplings. Bond couplings are keyed by position, so
/// bonds crossing the boundary of `V_n` are drawn like interior ones.
pub fn finite_volume_average_f(
    model: &DisorderedEmchModel,
    t: f64,
    n: usize,
    stride: usize,
    seed: u64,
) -> Result<FiniteVolumeEstimate> {
    model.validate()?;
    if model.kernel.coordination().is_none() {
        return Err(Error::invalid("finite-volume average needs the nearest-neighbour kernel"));
    }
    if stride == 0 {
        return Err(Error::invalid("stride must be positive"));
    }
    let d = model.kernel.dimension;
    let sites: Vec<Vec<i64>> = box_sites(d, n as i64).into_iter().step_by(stride).collect();
    let streams = Streams::new(seed);
    // Bond (x, x + e_mu) is keyed by x shifted into [0, 2n + 2].
    let width = 2 * n as u64 + 3;
    let bond_key = |x: &[i64], mu: usize| -> u64 {
        let pos = x.iter().rev().fold(0u64, |acc, &c| acc * width + (c + n as i64 + 1) as u64);
        pos * d as u64 + mu as u64
    };
    let amp = 2.0 * model.beta_coupling * t;
    let products: Vec<f64> = sites
        .par_iter()
        .map(|x| {
            let mut p = 1.0;
            let mut y = x.clone();
            for mu in 0..d {
                let j_up = model.distribution.sample(&mut streams.stream("bond", bond_key(x, mu)));
                y[mu] -= 1;
                let j_down = model.distribution.sample(&mut streams.stream("bond", bond_key(&y, mu)));
                y[mu] += 1;
                p *= (amp * j_up).cos() * (amp * j_down).cos();
            }
            p
        })
        .collect();
    let delta = model.delta();
    let blocks = products.len().min(100);
    let size = products.len().div_ceil(blocks);
    let block_means: Vec<f64> = products.chunks(size).map(|c| pairwise_sum(c) / c.len() as f64).collect();
    let (_, block_err) = mean_stderr(&block_means);
    Ok(FiniteVolumeEstimate {
        value: delta * (pairwise_sum(&products) / products.len() as f64),
        stderr: delta.abs() * block_err,
        sites: products.len(),
    })
}
