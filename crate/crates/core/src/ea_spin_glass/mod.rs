//! Edwards–Anderson spin glass on square and cubic boxes: classical and
//! quantum ground states, frustration and gauge symmetry, and cluster
//! lower bounds on the ground-state energy density.

mod classical;
mod cluster;
mod lattice;
mod quantum;
mod scan;

pub use classical::{
    classical_energy, ground_state, ground_state_exhaustive, ground_state_transfer, GroundStateResult, Solver,
    EXHAUSTIVE_MAX_SITES, TRANSFER_MAX_OPS,
};
pub use cluster::{
    cluster_bonds, cluster_lower_bound, cluster_min_energy, counting_factor, ideal_energy, misfit, ClusterBound,
    Fraction,
};
pub use lattice::{
    gauge_transform, plaquette_frustration, plaquette_frustrations, Anisotropy, Bond, BoundaryCondition, EAInstance,
    Frustration, Lattice,
};
pub use quantum::{
    quantum_ground_energy, quantum_ground_energy_dense, EigenMethod, PairHamiltonian, QuantumGroundState,
    DENSE_MAX_DIM, QUANTUM_MAX_SITES,
};
pub use scan::{energy_density_scan, ScanRow, ScanTable};
