use crate::error::{Error, Result};

use super::potential::SparsePotential;

/// `|cos phi|` below this is treated as the pinned case `u_0 = 0`.
const PINNED_COS_TOL: f64 = 1e-12;

/// The phase boundary condition `u_{-1} cos(phi) - u_0 sin(phi) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// `u_{-1} = tan(phi) u_0`, folded into the diagonal at site 0.
    Phase { tan_phi: f64 },
    /// `phi = pi/2`: the condition forces `u_0 = 0`, so the finite
    /// vectors start at site 1 (with a Dirichlet wall at site 0).
    Pinned,
}

impl Boundary {
    pub fn from_phi(phi: f64) -> Self {
        if phi.cos().abs() < PINNED_COS_TOL {
            Boundary::Pinned
        } else {
            Boundary::Phase { tan_phi: phi.tan() }
        }
    }

    /// Lattice site stored at index 0 of a truncated vector.
    pub fn first_site(&self) -> u64 {
        match self {
            Boundary::Phase { .. } => 0,
            Boundary::Pinned => 1,
        }
    }
}

/// Symmetric tridiagonal truncation with unit off-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    pub diagonal: Vec<f64>,
    /// Lattice site of row 0.
    pub first_site: u64,
}

impl JacobiMatrix {
    pub fn truncate(pot: &SparsePotential, n: usize, phi: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("truncation size must be positive"));
        }
        let boundary = Boundary::from_phi(phi);
        let first_site = boundary.first_site();
        let mut diagonal = pot.diagonal(first_site, n);
        if let Boundary::Phase { tan_phi } = boundary {
            diagonal[0] += tan_phi;
        }
        Ok(JacobiMatrix {
            diagonal,
            first_site,
        })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if u.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: u.len(),
            });
        }
        Ok((0..n)
            .map(|k| {
                let left = if k > 0 { u[k - 1] } else { 0.0 };
                let right = if k + 1 < n { u[k + 1] } else { 0.0 };
                left + right + self.diagonal[k] * u[k]
            })
            .collect())
    }
}

/// `(J u)_n = u_{n+1} + u_{n-1} + v_n u_n` on a finite window, with the
/// boundary condition eliminating `u_{-1}` and `u_n = 0` past the end.
///
/// For `phi = pi/2` index `k` of `u` is lattice site `k + 1`.
pub fn apply_operator(u: &[f64], pot: &SparsePotential, phi: f64) -> Result<Vec<f64>> {
    if u.is_empty() {
        return Err(Error::invalid("cannot apply the operator to an empty sequence"));
    }
    JacobiMatrix::truncate(pot, u.len(), phi)?.apply(u)
}
