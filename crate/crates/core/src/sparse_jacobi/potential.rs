use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stream::Streams;

/// Parameters of the sparse random Jacobi operator on the half line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparseModelParams {
    /// Sparseness base: unperturbed gaps grow like `beta_base^j`.
    pub beta_base: u32,
    /// Bump strength, in (0, 1).
    pub v: f64,
    /// Boundary phase in [0, pi).
    pub phi: f64,
    /// Number of bumps generated.
    pub max_bump_index: usize,
    pub seed: u64,
}

impl SparseModelParams {
    pub fn new(beta_base: u32, v: f64, phi: f64, max_bump_index: usize, seed: u64) -> Result<Self> {
        let p = SparseModelParams {
            beta_base,
            v,
            phi,
            max_bump_index,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta_base < 2 {
            return Err(Error::invalid(format!(
                "beta must be an integer >= 2, got {}",
                self.beta_base
            )));
        }
        if !(self.v > 0.0 && self.v < 1.0) {
            return Err(Error::invalid(format!("v must lie in (0, 1), got {}", self.v)));
        }
        if !(0.0..std::f64::consts::PI).contains(&self.phi) {
            return Err(Error::invalid(format!("phi must lie in [0, pi), got {}", self.phi)));
        }
        if self.max_bump_index < 1 {
            return Err(Error::invalid("max_bump_index must be >= 1"));
        }
        unperturbed_positions(self.beta_base, self.max_bump_index).map(|_| ())
    }
}

/// Bump sites `a_j + omega_j` of the sparse potential, all with height `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsePotential {
    pub beta_base: u32,
    pub v: f64,
    pub positions: Vec<u64>,
    pub omegas: Vec<i64>,
}

/// `a_1 = beta - 1`, `a_j = a_{j-1} + beta^j`.
pub fn unperturbed_positions(beta_base: u32, count: usize) -> Result<Vec<u64>> {
    let beta = beta_base as u64;
    let mut out = Vec::with_capacity(count);
    let mut a = beta - 1;
    let mut power = beta;
    for j in 1..=count {
        if j > 1 {
            power = power
                .checked_mul(beta)
                .ok_or_else(|| overflow(beta_base, count))?;
            a = a.checked_add(power).ok_or_else(|| overflow(beta_base, count))?;
        }
        out.push(a);
    }
    // Room for omega_j <= j without wrapping.
    if a.checked_add(count as u64).is_none() {
        return Err(overflow(beta_base, count));
    }
    Ok(out)
}

fn overflow(beta: u32, count: usize) -> Error {
    Error::invalid(format!(
        "{count} bumps with beta = {beta} overflow 64-bit site indices"
    ))
}

impl SparsePotential {
    /// Draws `omega_j` uniformly from `{-j, ..., j}`, one substream per `j`,
    /// so adding bumps never moves the earlier ones.
    pub fn build(params: &SparseModelParams) -> Result<Self> {
        Self::build_from_streams(params, &Streams::new(params.seed))
    }

    pub fn build_from_streams(params: &SparseModelParams, streams: &Streams) -> Result<Self> {
        params.validate()?;
        let omegas = (1..=params.max_bump_index as i64)
            .map(|j| streams.stream("bump-offset", j as u64).random_range(-j..=j))
            .collect();
        Self::from_omegas(params.beta_base, params.v, omegas)
    }

    /// Potential with prescribed offsets; `|omega_j| <= j` is enforced.
    pub fn from_omegas(beta_base: u32, v: f64, omegas: Vec<i64>) -> Result<Self> {
        if beta_base < 2 {
            return Err(Error::invalid("beta must be >= 2"));
        }
        if omegas.is_empty() {
            return Err(Error::invalid("at least one bump is required"));
        }
        let base = unperturbed_positions(beta_base, omegas.len())?;
        let mut positions = Vec::with_capacity(base.len());
        for (j, (&a, &w)) in base.iter().zip(&omegas).enumerate() {
            let j = j as i64 + 1;
            if w.abs() > j {
                return Err(Error::invalid(format!("omega_{j} = {w} outside {{-{j}, ..., {j}}}")));
            }
            positions.push((a as i64 + w) as u64);
        }
        debug_assert!(positions.windows(2).all(|p| p[0] < p[1]));
        Ok(SparsePotential {
            beta_base,
            v,
            positions,
            omegas,
        })
    }

    /// A potential with no bumps inside any finite window of interest.
    pub fn free() -> Self {
        SparsePotential {
            beta_base: 2,
            v: 0.0,
            positions: Vec::new(),
            omegas: Vec::new(),
        }
    }

    /// Potential value at site `n`.
    pub fn value_at(&self, n: u64) -> f64 {
        if self.positions.binary_search(&n).is_ok() {
            self.v
        } else {
            0.0
        }
    }

    /// Diagonal `v_n` for the sites `first .. first + len`.
    pub fn diagonal(&self, first: u64, len: usize) -> Vec<f64> {
        let mut d = vec![0.0; len];
        let end = first + len as u64;
        for &p in &self.positions {
            if p >= first && p < end {
                d[(p - first) as usize] = self.v;
            }
        }
        d
    }

    pub fn bump_count(&self) -> usize {
        self.positions.len()
    }
}

/// `#{j : a_j <= R} / R`, the one-dimensional density of bump sites.
pub fn concentration_ratio(pot: &SparsePotential, radius: u64) -> Result<f64> {
    if radius < 1 {
        return Err(Error::invalid("radius must be >= 1"));
    }
    let count = pot.positions.partition_point(|&p| p <= radius);
    Ok(count as f64 / radius as f64)
}
