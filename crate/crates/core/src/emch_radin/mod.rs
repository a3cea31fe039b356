//! The random Emch–Radin model: Ising-type `Z Z` couplings with a
//! transverse product initial state, whose transverse magnetization is
//! known in closed form.

mod dynamics;
mod kernel;
mod stability;

pub use dynamics::{
    closed_form_f, closed_form_trace, delta_of_gamma, dense_magnetization, exact_magnetization,
    finite_volume_average_f, mc_average_f, printed_form_f, DisorderedEmchModel, FiniteVolumeEstimate,
    MagnetizationTrace, SpinCluster, DENSE_MAX_SPINS, EXACT_MAX_SPINS,
};
pub use kernel::{InteractionKernel, KernelShape, SummabilityClass};
pub use stability::{
    decay_classify, stability_classify, DecayClassification, DecayLabel, StabilityReport, MIN_TRACE_POINTS,
    RECURRENCE_FRACTION,
};
