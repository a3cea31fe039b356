//! Cross-module checks against independent reference computations.

use proptest::prelude::*;

use qdlab::ea_spin_glass::{
    classical_energy, gauge_transform, ground_state_exhaustive, ground_state_transfer, quantum_ground_energy,
    Anisotropy, BoundaryCondition, EAInstance, Lattice,
};
use qdlab::ensembles::CouplingDistribution;
use qdlab::linalg::sturm_count;
use qdlab::sparse_jacobi::{truncated_spectrum, JacobiMatrix, SparseModelParams, SparsePotential};
use qdlab::stream::Streams;

fn potential(v: f64, seed: u64) -> SparsePotential {
    SparsePotential::build(&SparseModelParams::new(2, v, 0.3, 12, seed).unwrap()).unwrap()
}

#[test]
fn eigenvalues_bracketed_by_sturm_counts() {
    for seed in 1..=4 {
        let pot = potential(0.8, seed);
        let n = 300;
        let eig = truncated_spectrum(&pot, n, 0.3).unwrap();
        let m = JacobiMatrix::truncate(&pot, n, 0.3).unwrap();
        let off = vec![1.0; n - 1];
        for (k, &lambda) in eig.values.iter().enumerate() {
            assert!(sturm_count(&m.diagonal, &off, lambda - 1e-9) <= k);
            assert!(sturm_count(&m.diagonal, &off, lambda + 1e-9) > k);
        }
    }
}

#[test]
fn eigenvectors_solve_the_truncated_equation() {
    let pot = potential(0.6, 9);
    let n = 200;
    let eig = truncated_spectrum(&pot, n, 0.3).unwrap();
    let m = JacobiMatrix::truncate(&pot, n, 0.3).unwrap();
    for k in (0..n).step_by(17) {
        let psi = eig.vector(k);
        let lambda = eig.values[k];
        for i in 0..n {
            let left = if i > 0 { psi[i - 1] } else { 0.0 };
            let right = if i + 1 < n { psi[i + 1] } else { 0.0 };
            let residual = left + right + m.diagonal[i] * psi[i] - lambda * psi[i];
            assert!(residual.abs() < 1e-10, "k = {k}, i = {i}");
        }
    }
}

fn instance(d: usize, side: usize, bc: BoundaryCondition, dist: CouplingDistribution, seed: u64) -> EAInstance {
    let lattice = Lattice::new(d, side, bc).unwrap();
    let mut rng = Streams::new(seed).stream("oracle-instance", 0);
    EAInstance::random(lattice, &dist, Anisotropy::ISING, &mut rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transfer_solver_matches_enumeration(
        seed in any::<u64>(),
        side in 2usize..=4,
        periodic in any::<bool>(),
        gaussian in any::<bool>(),
    ) {
        let bc = if periodic { BoundaryCondition::Periodic } else { BoundaryCondition::Free };
        let dist = if gaussian { CouplingDistribution::gaussian() } else { CouplingDistribution::Bernoulli };
        let inst = instance(2, side, bc, dist, seed);
        let a = ground_state_exhaustive(&inst).unwrap();
        let b = ground_state_transfer(&inst).unwrap();
        prop_assert!((a.energy - b.energy).abs() < 1e-9);
        prop_assert_eq!(a.degeneracy, b.degeneracy);
        prop_assert!((classical_energy(&inst, &b.witness).unwrap() - b.energy).abs() < 1e-9);
    }

    #[test]
    fn gauge_transform_keeps_ground_energy(seed in any::<u64>(), site in 0usize..9) {
        let inst = instance(2, 3, BoundaryCondition::Free, CouplingDistribution::Uniform, seed);
        let gauged = gauge_transform(&inst, site).unwrap();
        let a = ground_state_exhaustive(&inst).unwrap();
        let b = ground_state_exhaustive(&gauged).unwrap();
        prop_assert!((a.energy - b.energy).abs() < 1e-12);
        prop_assert_eq!(a.degeneracy, b.degeneracy);
    }
}

#[test]
fn ising_quantum_ground_energy_is_classical() {
    for seed in 1..=5 {
        let inst = instance(2, 3, BoundaryCondition::Free, CouplingDistribution::gaussian(), seed);
        let classical = ground_state_exhaustive(&inst).unwrap().energy;
        let quantum = quantum_ground_energy(&inst).unwrap().energy;
        assert!((classical - quantum).abs() < 1e-9, "seed {seed}: {classical} vs {quantum}");
    }
}
