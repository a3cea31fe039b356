use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::fit_line;

/// Interaction profile `epsilon(n)` on `Z^d`, with `epsilon(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelShape {
    /// `1` on the `2d` unit vectors `+-e_i`.
    NearestNeighbor,
    /// `amplitude * |n|^(-exponent)` (Euclidean norm) for `n != 0`.
    PowerLaw { amplitude: f64, exponent: f64 },
    /// Finite table of `(n, epsilon(n))`; entries at the origin are ignored.
    Tabulated { entries: Vec<(Vec<i64>, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionKernel {
    pub dimension: usize,
    pub shape: KernelShape,
}

/// Which of `sum epsilon` and `sum epsilon^2` converge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SummabilityClass {
    L1,
    L2Only,
    None,
}

impl SummabilityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SummabilityClass::L1 => "L1",
            SummabilityClass::L2Only => "L2_ONLY",
            SummabilityClass::None => "NONE",
        }
    }
}

impl InteractionKernel {
    pub fn nearest_neighbor(dimension: usize) -> Result<Self> {
        Self::new(dimension, KernelShape::NearestNeighbor)
    }

    pub fn power_law(dimension: usize, amplitude: f64, exponent: f64) -> Result<Self> {
        Self::new(dimension, KernelShape::PowerLaw { amplitude, exponent })
    }

    pub fn new(dimension: usize, shape: KernelShape) -> Result<Self> {
        if !(1..=3).contains(&dimension) {
            return Err(Error::invalid(format!("kernel dimension must be 1, 2 or 3, got {dimension}")));
        }
        match &shape {
            KernelShape::PowerLaw { amplitude, exponent } => {
                if !(*amplitude >= 0.0 && exponent.is_finite() && *exponent > 0.0) {
                    return Err(Error::invalid("power law needs amplitude >= 0 and exponent > 0"));
                }
            }
            KernelShape::Tabulated { entries } => {
                if entries.iter().any(|(n, e)| n.len() != dimension || !(*e >= 0.0)) {
                    return Err(Error::invalid("table entries need matching dimension and epsilon >= 0"));
                }
            }
            KernelShape::NearestNeighbor => {}
        }
        Ok(InteractionKernel { dimension, shape })
    }

    pub fn value(&self, n: &[i64]) -> f64 {
        if n.iter().all(|&x| x == 0) {
            return 0.0;
        }
        match &self.shape {
            KernelShape::NearestNeighbor => {
                if n.iter().map(|x| x.unsigned_abs()).sum::<u64>() == 1 {
                    1.0
                } else {
                    0.0
                }
            }
            KernelShape::PowerLaw { amplitude, exponent } => {
                let r2: f64 = n.iter().map(|&x| (x * x) as f64).sum();
                amplitude * r2.powf(-0.5 * exponent)
            }
            KernelShape::Tabulated { entries } => entries
                .iter()
                .find(|(m, _)| m.as_slice() == n)
                .map_or(0.0, |(_, e)| *e),
        }
    }

    /// Non-zero `(n, epsilon(n))` when the support is finite.
    pub fn finite_support(&self) -> Option<Vec<(Vec<i64>, f64)>> {
        match &self.shape {
            KernelShape::NearestNeighbor => {
                let mut out = Vec::with_capacity(2 * self.dimension);
                for i in 0..self.dimension {
                    for s in [1, -1] {
                        let mut n = vec![0; self.dimension];
                        n[i] = s;
                        out.push((n, 1.0));
                    }
                }
                Some(out)
            }
            KernelShape::PowerLaw { amplitude, .. } => (*amplitude == 0.0).then(Vec::new),
            KernelShape::Tabulated { entries } => Some(
                entries
                    .iter()
                    .filter(|(n, e)| *e > 0.0 && n.iter().any(|&x| x != 0))
                    .cloned()
                    .collect(),
            ),
        }
    }

    /// Coordination number of the nearest-neighbour kernel.
    pub fn coordination(&self) -> Option<usize> {
        matches!(self.shape, KernelShape::NearestNeighbor).then_some(2 * self.dimension)
    }

    /// `(sum epsilon, sum epsilon^2)` over the cube `|n|_inf <= radius`.
    pub fn partial_sums(&self, radius: i64) -> (f64, f64) {
        let d = self.dimension;
        let side = 2 * radius + 1;
        let total = side.pow(d as u32);
        let mut n = vec![0i64; d];
        let (mut s1, mut s2) = (0.0, 0.0);
        for idx in 0..total {
            let mut rest = idx;
            for x in n.iter_mut() {
                *x = rest % side - radius;
                rest /= side;
            }
            let e = self.value(&n);
            s1 += e;
            s2 += e * e;
        }
        (s1, s2)
    }

    /// Classifies summability from partial sums over dyadic cubes: a sum
    /// is judged convergent when its dyadic increments vanish or shrink
    /// geometrically.
    pub fn summability_class(&self) -> SummabilityClass {
        if self.finite_support().is_some() {
            return SummabilityClass::L1;
        }
        let max_k = match self.dimension {
            1 => 18,
            2 => 9,
            _ => 6,
        };
        let sums: Vec<(f64, f64)> = (2..=max_k).map(|k| self.partial_sums(1 << k)).collect();
        let converges = |pick: fn(&(f64, f64)) -> f64| {
            let inc: Vec<f64> = sums.windows(2).map(|w| pick(&w[1]) - pick(&w[0])).collect();
            if inc.iter().all(|&x| x <= 1e-15 * pick(&sums[0]).abs().max(1.0)) {
                return true;
            }
            let tail = &inc[inc.len() / 2..];
            let ks: Vec<f64> = (0..tail.len()).map(|k| k as f64).collect();
            let logs: Vec<f64> = tail.iter().map(|x| x.max(f64::MIN_POSITIVE).log2()).collect();
            fit_line(&ks, &logs).is_some_and(|f| f.slope < -0.1)
        };
        if converges(|s| s.0) {
            SummabilityClass::L1
        } else if converges(|s| s.1) {
            SummabilityClass::L2Only
        } else {
            SummabilityClass::None
        }
    }

    /// Class implied by the closed form where one is known.
    pub fn analytic_class(&self) -> Option<SummabilityClass> {
        match &self.shape {
            KernelShape::PowerLaw { amplitude, exponent } if *amplitude > 0.0 => {
                let d = self.dimension as f64;
                Some(if *exponent > d {
                    SummabilityClass::L1
                } else if 2.0 * exponent > d {
                    SummabilityClass::L2Only
                } else {
                    SummabilityClass::None
                })
            }
            _ => self.finite_support().map(|_| SummabilityClass::L1),
        }
    }
}
