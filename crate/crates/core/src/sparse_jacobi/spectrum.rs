use crate::error::{Error, Result};
use crate::linalg::{tridiagonal_eigen, Eigendecomposition};

use super::operator::JacobiMatrix;
use super::potential::SparsePotential;

/// Largest truncation accepted for a dense eigendecomposition
/// (`n^2` doubles for the eigenvectors).
pub const DEFAULT_MAX_DIM: usize = 8192;

/// Full eigendecomposition of the `n x n` truncation, eigenvalues ascending.
pub fn truncated_spectrum(pot: &SparsePotential, n: usize, phi: f64) -> Result<Eigendecomposition> {
    truncated_spectrum_with_budget(pot, n, phi, DEFAULT_MAX_DIM)
}

pub fn truncated_spectrum_with_budget(
    pot: &SparsePotential,
    n: usize,
    phi: f64,
    max_dim: usize,
) -> Result<Eigendecomposition> {
    if n < 2 {
        return Err(Error::invalid("truncation size must be >= 2"));
    }
    if n > max_dim {
        return Err(Error::Budget {
            what: "truncated operator dimension",
            requested: n,
            limit: max_dim,
        });
    }
    let m = JacobiMatrix::truncate(pot, n, phi)?;
    tridiagonal_eigen(&m.diagonal, &vec![1.0; n - 1])
}

/// `1 / sum |psi_k|^4` for a normalized vector: the number of sites it
/// effectively occupies.
pub fn participation_ratio(psi: &[f64]) -> f64 {
    let norm2: f64 = psi.iter().map(|x| x * x).sum();
    let p4: f64 = psi.iter().map(|x| x.powi(4)).sum();
    norm2 * norm2 / p4
}
