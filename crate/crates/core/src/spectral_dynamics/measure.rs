use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Eigendecomposition;

/// Atoms closer than this are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Finite atomic measure: sorted support points with non-negative weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    support: Vec<f64>,
    weights: Vec<f64>,
}

impl AtomicMeasure {
    /// Sorts the atoms and merges those within [`MERGE_TOLERANCE`].
    pub fn new(support: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: support.len(),
                got: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::invalid(format!("measure weights must be non-negative, got {w}")));
        }
        if support.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("support points must be finite"));
        }
        let mut atoms: Vec<(f64, f64)> = support.into_iter().zip(weights).collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            match merged.last_mut() {
                Some(last) if x - last.0 <= MERGE_TOLERANCE => last.1 += w,
                _ => merged.push((x, w)),
            }
        }
        let (support, weights) = merged.into_iter().unzip();
        Ok(AtomicMeasure { support, weights })
    }

    pub fn point_mass(x: f64, w: f64) -> Self {
        AtomicMeasure {
            support: vec![x],
            weights: vec![w],
        }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn mass(&self) -> f64 {
        crate::numeric::pairwise_sum(&self.weights)
    }

    /// `sum w_k^2`, the long-time Cesàro limit of `|mu_hat|^2`.
    pub fn atomic_square_sum(&self) -> f64 {
        let sq: Vec<f64> = self.weights.iter().map(|w| w * w).collect();
        crate::numeric::pairwise_sum(&sq)
    }

    /// Mass of the closed interval `[lo, hi]`.
    pub fn interval_mass(&self, lo: f64, hi: f64) -> f64 {
        let a = self.support.partition_point(|&x| x < lo);
        let b = self.support.partition_point(|&x| x <= hi);
        if b <= a {
            return 0.0;
        }
        self.weights[a..b].iter().sum()
    }

    /// Product measure pushed forward by `(x, y) -> x + scale * y`.
    pub fn convolve_scaled(&self, other: &AtomicMeasure, scale: f64) -> Result<Self> {
        let mut support = Vec::with_capacity(self.len() * other.len());
        let mut weights = Vec::with_capacity(self.len() * other.len());
        for (&x, &w) in self.support.iter().zip(&self.weights) {
            for (&y, &u) in other.support.iter().zip(&other.weights) {
                support.push(x + scale * y);
                weights.push(w * u);
            }
        }
        AtomicMeasure::new(support, weights)
    }
}

/// Spectral measure of `vector`: atoms at the eigenvalues with weights
/// `|<e_k, vector>|^2`.
pub fn spectral_measure(eig: &Eigendecomposition, vector: &[f64]) -> Result<AtomicMeasure> {
    if vector.len() != eig.dim() {
        return Err(Error::DimensionMismatch {
            expected: eig.dim(),
            got: vector.len(),
        });
    }
    let weights = eig
        .vectors()
        .map(|e| {
            let overlap: f64 = e.iter().zip(vector).map(|(a, b)| a * b).sum();
            overlap * overlap
        })
        .collect();
    AtomicMeasure::new(eig.values.clone(), weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse_jacobi::{truncated_spectrum, SparsePotential};
    use std::f64::consts::PI;

    #[test]
    fn merges_and_sorts() {
        let m = AtomicMeasure::new(vec![1.0, -1.0, 1.0 + 1e-14], vec![0.25, 0.5, 0.25]).unwrap();
        assert_eq!(m.support(), &[-1.0, 1.0]);
        assert_eq!(m.weights(), &[0.5, 0.5]);
        assert!(AtomicMeasure::new(vec![0.0], vec![-1.0]).is_err());
    }

    #[test]
    fn eigenvector_gives_single_atom() {
        let e = truncated_spectrum(&SparsePotential::free(), 5, 0.0).unwrap();
        let mu = spectral_measure(&e, e.vector(3)).unwrap();
        let big: Vec<(f64, f64)> = mu
            .support()
            .iter()
            .zip(mu.weights())
            .filter(|(_, &w)| w > 1e-20)
            .map(|(&x, &w)| (x, w))
            .collect();
        assert_eq!(big.len(), 1);
        assert!((big[0].0 - e.values[3]).abs() < 1e-14 && (big[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_zero_weights_follow_sine_squares() {
        let e = truncated_spectrum(&SparsePotential::free(), 5, 0.0).unwrap();
        let mu = spectral_measure(&e, &[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        // Eigenvector k of the Dirichlet Laplacian is sqrt(2/6) sin(k pi (m+1)/6).
        for (&x, &w) in mu.support().iter().zip(mu.weights()) {
            let k = ((x / 2.0).acos() * 6.0 / PI).round();
            let expected = (2.0 / 6.0) * (k * PI / 6.0).sin().powi(2);
            assert!((w - expected).abs() < 1e-12);
        }
        assert!((mu.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let e = truncated_spectrum(&SparsePotential::free(), 5, 0.0).unwrap();
        assert!(spectral_measure(&e, &[1.0; 4]).is_err());
    }
}
