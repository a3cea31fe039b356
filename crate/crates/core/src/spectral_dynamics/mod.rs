//! Spectral measures and the dynamics they control: Fourier–Stieltjes
//! transforms, Cesàro decay, Hölder scaling and return probabilities.

mod cantor;
mod holder;
mod measure;
mod transform;

pub use cantor::{cantor_dimension, cantor_measure, cantor_transform};
pub use holder::{dyadic_scales, holder_estimate, local_dimension, max_window_mass, HolderReport};
pub use measure::{spectral_measure, AtomicMeasure, MERGE_TOLERANCE};
pub use transform::{
    cesaro_average, cesaro_average_quadrature, cesaro_series, fit_decay_exponent, fs_transform,
    rajchman_indicator, rajchman_indicator_measure, survival_cesaro, CesaroSeries, DecayFit,
};
