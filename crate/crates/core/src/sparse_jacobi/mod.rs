//! The sparse random Jacobi operator on the half line: bumps of height
//! `v` at sites `a_j + omega_j` whose gaps grow like `beta^j`.

mod classify;
mod operator;
mod potential;
mod spectrum;
mod transfer;

pub use classify::{
    classify_energy, classify_energy_excluding, criterion_value, critical_disorder, mobility_edges,
    MobilityEdges, RationalExclusion, RegionClassification, RegionLabel, EDGE_TOLERANCE,
};
pub use operator::{apply_operator, Boundary, JacobiMatrix};
pub use potential::{concentration_ratio, unperturbed_positions, SparseModelParams, SparsePotential};
pub use spectrum::{participation_ratio, truncated_spectrum, truncated_spectrum_with_budget, DEFAULT_MAX_DIM};
pub use transfer::{
    boundary_vector, prufer_evolve, transfer_product, transfer_step, PruferFrame, PruferState,
    PruferTrajectory,
};
