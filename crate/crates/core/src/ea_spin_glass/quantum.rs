//! Quantum ground energy of the anisotropic pair Hamiltonian
//! `sum J_ij (a_x X_i X_j + a_y Y_i Y_j + a_z Z_i Z_j)` in the `2^N`
//! dimensional computational basis (bit `k` set means spin `k` down).

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{lanczos_lowest, symmetric_eigen};
use crate::stream::Streams;

use super::lattice::EAInstance;

pub const QUANTUM_MAX_SITES: usize = 12;
/// Up to this dimension the matrix is diagonalized densely.
pub const DENSE_MAX_DIM: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenMethod {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumGroundState {
    pub energy: f64,
    pub dimension: usize,
    pub method: EigenMethod,
}

/// Sparse action of the Hamiltonian.
pub struct PairHamiltonian {
    dim: usize,
    diagonal: Vec<f64>,
    /// `(flip mask, i, j, J a_x, J a_y)` per bond with a transverse part.
    hops: Vec<(usize, usize, usize, f64, f64)>,
    norm_bound: f64,
}

impl PairHamiltonian {
    pub fn new(instance: &EAInstance) -> Result<Self> {
        let n = instance.sites();
        if n > QUANTUM_MAX_SITES {
            return Err(Error::Budget {
                what: "quantum sites",
                requested: n,
                limit: QUANTUM_MAX_SITES,
            });
        }
        let dim = 1usize << n;
        let al = instance.anisotropy;
        let bonds: Vec<_> = instance.lattice.bonds().iter().zip(&instance.couplings).collect();
        let diagonal = (0..dim)
            .map(|s| {
                bonds
                    .iter()
                    .map(|(b, &j)| {
                        let same = (s >> b.a ^ s >> b.b) & 1 == 0;
                        if same { j * al.z } else { -j * al.z }
                    })
                    .sum()
            })
            .collect();
        let hops = if al.x == 0.0 && al.y == 0.0 {
            Vec::new()
        } else {
            bonds
                .iter()
                .map(|(b, &j)| ((1 << b.a) | (1 << b.b), b.a, b.b, j * al.x, j * al.y))
                .collect()
        };
        let norm_bound = instance.coupling_l1() * (al.x.abs() + al.y.abs() + al.z.abs());
        Ok(PairHamiltonian {
            dim,
            diagonal,
            hops,
            norm_bound,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `y = H x`. `Y_i Y_j` maps `|s>` to `-z_i z_j |s ^ mask>`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (s, out) in y.iter_mut().enumerate() {
            let mut acc = self.diagonal[s] * x[s];
            for &(mask, i, j, jx, jy) in &self.hops {
                let same = (s >> i ^ s >> j) & 1 == 0;
                let coef = if same { jx - jy } else { jx + jy };
                acc += coef * x[s ^ mask];
            }
            *out = acc;
        }
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        if r == c {
            return self.diagonal[r];
        }
        self.hops
            .iter()
            .filter(|h| r ^ c == h.0)
            .map(|&(_, i, j, jx, jy)| {
                let same = (c >> i ^ c >> j) & 1 == 0;
                if same { jx - jy } else { jx + jy }
            })
            .sum()
    }
}

/// Smallest eigenvalue: dense for `2^N <= 256`, Lanczos above.
pub fn quantum_ground_energy(instance: &EAInstance) -> Result<QuantumGroundState> {
    let h = PairHamiltonian::new(instance)?;
    if h.dim <= DENSE_MAX_DIM {
        quantum_ground_energy_dense(instance)
    } else {
        quantum_ground_energy_lanczos(&h)
    }
}

pub fn quantum_ground_energy_dense(instance: &EAInstance) -> Result<QuantumGroundState> {
    let h = PairHamiltonian::new(instance)?;
    if h.dim > 1 << 11 {
        return Err(Error::Budget {
            what: "dense quantum dimension",
            requested: h.dim,
            limit: 1 << 11,
        });
    }
    let eig = symmetric_eigen(h.dim, |r, c| h.entry(r, c))?;
    Ok(QuantumGroundState {
        energy: eig.values[0],
        dimension: h.dim,
        method: EigenMethod::Dense,
    })
}

fn quantum_ground_energy_lanczos(h: &PairHamiltonian) -> Result<QuantumGroundState> {
    let mut rng = Streams::new(0).stream("lanczos-start", h.dim as u64);
    let start: Vec<f64> = (0..h.dim).map(|_| rng.random::<f64>() - 0.5).collect();
    let r = lanczos_lowest(h.dim, |x, y| h.apply(x, y), &start, 800, h.norm_bound)?;
    Ok(QuantumGroundState {
        energy: r.value,
        dimension: h.dim,
        method: EigenMethod::Lanczos,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ea_spin_glass::classical::ground_state_exhaustive;
    use crate::ea_spin_glass::lattice::{Anisotropy, BoundaryCondition, Lattice};
    use crate::ensembles::CouplingDistribution;

    fn random(d: usize, l: usize, bc: BoundaryCondition, an: Anisotropy, seed: u64) -> EAInstance {
        let lat = Lattice::new(d, l, bc).unwrap();
        let dist = CouplingDistribution::gaussian();
        EAInstance::random(lat, &dist, an, &mut Streams::new(seed).stream("q", 0))
    }

    #[test]
    fn heisenberg_pair_singlet() {
        // Two sites joined once: the free 2x2 lattice has four bonds, so
        // switch three of them off.
        let lat = Lattice::new(2, 2, BoundaryCondition::Free).unwrap();
        let inst = EAInstance::new(lat, vec![1.0, 0.0, 0.0, 0.0], Anisotropy::HEISENBERG).unwrap();
        let e = quantum_ground_energy(&inst).unwrap();
        assert!((e.energy + 3.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_products_act_correctly() {
        // Y Y on |00> gives -|11>, on |01> gives +|10>.
        let lat = Lattice::new(2, 2, BoundaryCondition::Free).unwrap();
        let inst = EAInstance::new(lat, vec![1.0, 0.0, 0.0, 0.0], Anisotropy { x: 0.0, y: 1.0, z: 0.0 }).unwrap();
        let h = PairHamiltonian::new(&inst).unwrap();
        let mut e00 = vec![0.0; 16];
        e00[0] = 1.0;
        let mut y = vec![0.0; 16];
        h.apply(&e00, &mut y);
        assert_eq!(y[3], -1.0);
        let mut e01 = vec![0.0; 16];
        e01[1] = 1.0;
        h.apply(&e01, &mut y);
        assert_eq!(y[2], 1.0);
    }

    #[test]
    fn classical_limit_matches_enumeration() {
        let cases = [
            (2, 2, BoundaryCondition::Free),
            (2, 2, BoundaryCondition::Periodic),
            (2, 3, BoundaryCondition::Free),
            (3, 2, BoundaryCondition::Free),
            (3, 2, BoundaryCondition::Periodic),
        ];
        for (k, &(d, l, bc)) in cases.iter().enumerate() {
            let inst = random(d, l, bc, Anisotropy::ISING, k as u64);
            let q = quantum_ground_energy(&inst).unwrap().energy;
            let c = ground_state_exhaustive(&inst).unwrap().energy;
            assert!((q - c).abs() < 1e-10, "{q} vs {c}");
        }
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let inst = random(3, 2, BoundaryCondition::Free, Anisotropy { x: 0.4, y: -0.3, z: 1.0 }, 9);
        let dense = quantum_ground_energy_dense(&inst).unwrap();
        let lanczos = quantum_ground_energy_lanczos(&PairHamiltonian::new(&inst).unwrap()).unwrap();
        assert!((dense.energy - lanczos.energy).abs() < 1e-10);
    }

    #[test]
    fn perturbation_bound() {
        for seed in 0..4 {
            let base = random(2, 3, BoundaryCondition::Free, Anisotropy::ISING, 100 + seed);
            let e0 = quantum_ground_energy(&base).unwrap().energy;
            for eps in [0.05, 0.2] {
                let an = Anisotropy { x: eps, y: 0.0, z: 1.0 };
                let pert = EAInstance { anisotropy: an, ..base.clone() };
                let e1 = quantum_ground_energy(&pert).unwrap().energy;
                let bound = an.l1_distance(&Anisotropy::ISING) * base.coupling_l1();
                assert!((e1 - e0).abs() <= bound + 1e-10);
                assert!(e1 <= e0 + 1e-10);
            }
        }
    }

    #[test]
    fn budget() {
        let lat = Lattice::new(2, 4, BoundaryCondition::Free).unwrap();
        let inst = EAInstance::new(lat.clone(), vec![1.0; lat.bonds().len()], Anisotropy::ISING).unwrap();
        assert!(quantum_ground_energy(&inst).unwrap_err().is_budget());
    }
}
