//! Lower bounds on the ground-state energy density from elementary
//! clusters (plaquette in two dimensions, unit cube in three) and the
//! misfit parameter.

use rayon::prelude::*;
use serde::Serialize;

use crate::ensembles::CouplingDistribution;
use crate::error::{Error, Result};
use crate::numeric::mean_stderr;
use crate::stream::Streams;

/// Exact fraction `numerator / denominator`, kept unreduced as produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub numerator: i64,
    pub denominator: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fraction {
    pub fn reduced(&self) -> Fraction {
        let g = gcd(self.numerator.unsigned_abs(), self.denominator).max(1);
        Fraction {
            numerator: self.numerator / g as i64,
            denominator: self.denominator / g,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Bonds of the elementary cluster as vertex pairs. Vertices of the
/// plaquette are the corners of the unit square in cyclic order; cube
/// vertices are 3-bit corner labels.
pub fn cluster_bonds(dimension: usize) -> Result<Vec<(usize, usize)>> {
    match dimension {
        2 => Ok(vec![(0, 1), (1, 2), (2, 3), (3, 0)]),
        3 => {
            let mut bonds = Vec::with_capacity(12);
            for v in 0..8usize {
                for bit in [1, 2, 4] {
                    if v & bit == 0 {
                        bonds.push((v, v | bit));
                    }
                }
            }
            Ok(bonds)
        }
        d => Err(Error::invalid(format!("cluster bound needs dimension 2 or 3, got {d}"))),
    }
}

/// Double-counting factor `c_d`: every bond belongs to `2(d-1)` clusters.
pub fn counting_factor(dimension: usize) -> Result<f64> {
    match dimension {
        2 => Ok(0.5),
        3 => Ok(0.25),
        d => Err(Error::invalid(format!("cluster bound needs dimension 2 or 3, got {d}"))),
    }
}

fn vertices(dimension: usize) -> usize {
    if dimension == 2 { 4 } else { 8 }
}

/// Minimum over spin configurations of `sum J_b s_a s_b` on the cluster.
pub fn cluster_min_energy(dimension: usize, couplings: &[f64]) -> Result<f64> {
    let bonds = cluster_bonds(dimension)?;
    if couplings.len() != bonds.len() {
        return Err(Error::DimensionMismatch {
            expected: bonds.len(),
            got: couplings.len(),
        });
    }
    let v = vertices(dimension);
    Ok((0..1usize << v)
        .map(|s| {
            bonds
                .iter()
                .zip(couplings)
                .map(|(&(a, b), j)| if (s >> a ^ s >> b) & 1 == 0 { *j } else { -j })
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min))
}

fn cluster_min_energy_int(bonds: &[(usize, usize)], vertices: usize, signs: u32) -> i64 {
    (0..1usize << vertices)
        .map(|s| {
            bonds
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| {
                    let j = if signs >> k & 1 == 1 { -1 } else { 1 };
                    if (s >> a ^ s >> b) & 1 == 0 { j } else { -j }
                })
                .sum::<i64>()
        })
        .min()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterBound {
    pub dimension: usize,
    pub c_d: f64,
    /// `c_d` times the disorder average of the cluster minimum.
    pub e0: f64,
    /// Lower bound on `Av(E_0)/N` for any box tiled by the cluster.
    pub per_site_bound: f64,
    /// Present for `+-1` couplings: `sum of minima / (configs / c_d)`.
    pub exact: Option<Fraction>,
    /// Sum of cluster minima over all coupling sign patterns.
    pub minimum_sum: Option<i64>,
    pub coupling_configs: Option<u64>,
    pub stderr: Option<f64>,
    pub samples: Option<usize>,
}

/// Cluster bound for `dimension`. Symmetric `+-1` couplings are averaged
/// exactly over all sign patterns; other ensembles by Monte Carlo with
/// `samples` draws.
pub fn cluster_lower_bound(
    dimension: usize,
    dist: &CouplingDistribution,
    samples: usize,
    seed: u64,
) -> Result<ClusterBound> {
    let c_d = counting_factor(dimension)?;
    let bonds = cluster_bonds(dimension)?;
    if *dist == CouplingDistribution::Bernoulli {
        let configs = 1u64 << bonds.len();
        let v = vertices(dimension);
        let sum: i64 = (0..configs as u32)
            .map(|signs| cluster_min_energy_int(&bonds, v, signs))
            .sum();
        let inverse_c = if dimension == 2 { 2 } else { 4 };
        let exact = Fraction {
            numerator: sum,
            denominator: configs * inverse_c,
        };
        let e0 = exact.to_f64();
        return Ok(ClusterBound {
            dimension,
            c_d,
            e0,
            per_site_bound: e0,
            exact: Some(exact),
            minimum_sum: Some(sum),
            coupling_configs: Some(configs),
            stderr: None,
            samples: None,
        });
    }
    if samples < 2 {
        return Err(Error::invalid("Monte Carlo cluster bound needs at least 2 samples"));
    }
    let streams = Streams::new(seed);
    let minima: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = streams.stream("cluster-sample", k as u64);
            let j: Vec<f64> = (0..bonds.len()).map(|_| dist.sample(&mut rng)).collect();
            cluster_min_energy(dimension, &j)
        })
        .collect::<Result<_>>()?;
    let (mean, err) = mean_stderr(&minima);
    Ok(ClusterBound {
        dimension,
        c_d,
        e0: c_d * mean,
        per_site_bound: c_d * mean,
        exact: None,
        minimum_sum: None,
        coupling_configs: None,
        stderr: Some(c_d * err),
        samples: Some(samples),
    })
}

/// Energy per site of an unfrustrated reference: `-d` for unit couplings.
pub fn ideal_energy(dimension: usize) -> f64 {
    -(dimension as f64)
}

/// `(|e_ideal| - |e_ground|) / |e_ideal|`.
pub fn misfit(e_ideal: f64, e_ground: f64) -> Result<f64> {
    if e_ideal == 0.0 || !e_ideal.is_finite() {
        return Err(Error::invalid("ideal energy must be non-zero"));
    }
    Ok((e_ideal.abs() - e_ground.abs()) / e_ideal.abs())
}
