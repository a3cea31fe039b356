//! Numerical laboratory for disordered spectral theory and spin systems:
//! sparse random Jacobi operators, spectral measures and their dynamics,
//! Edwards-Anderson ground states and the random Emch-Radin model.

pub mod ea_spin_glass;
pub mod emch_radin;
pub mod ensembles;
pub mod error;
pub mod kronecker_2d;
pub mod linalg;
pub mod numeric;
pub mod sparse_jacobi;
pub mod spectral_dynamics;
pub mod stream;

pub use error::{Error, Result};
