//! The middle-thirds Cantor measure on [-pi, pi].

use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::measure::AtomicMeasure;

/// Partial product `prod_{j=1}^{depth} cos(2/3 u pi 3^{-j+1})` of the
/// Cantor measure's Fourier–Stieltjes transform.
pub fn cantor_transform(u: f64, depth: u32) -> f64 {
    let mut scale = 1.0; // 3^{-j+1}
    let mut product = 1.0;
    for _ in 0..depth {
        product *= (2.0 / 3.0 * u * PI * scale).cos();
        scale /= 3.0;
    }
    product
}

/// Level-`depth` approximation: `2^depth` equal atoms at
/// `sum_{j<=depth} (+-) 2 pi 3^{-j}`. Its transform is exactly
/// `cantor_transform(t, depth)`.
pub fn cantor_measure(depth: u32) -> Result<AtomicMeasure> {
    if depth == 0 || depth > 24 {
        return Err(Error::invalid(format!("cantor depth must be in 1..=24, got {depth}")));
    }
    let mut points = vec![0.0];
    let mut step = 2.0 * PI;
    for _ in 0..depth {
        step /= 3.0;
        points = points.iter().flat_map(|&x| [x - step, x + step]).collect();
    }
    let w = 0.5f64.powi(depth as i32);
    let n = points.len();
    AtomicMeasure::new(points, vec![w; n])
}

/// `log 2 / log 3`, the Hausdorff dimension of the middle-thirds set.
pub fn cantor_dimension() -> f64 {
    2f64.ln() / 3f64.ln()
}
