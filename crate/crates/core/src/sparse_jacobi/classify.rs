//! Spectral-region labels from the sharp s.c./p.p. criterion
//! `(beta - 1)(4 - lambda^2) / v^2` versus 1.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::potential::SparseModelParams;

/// `|criterion - 1|` at or below this is labelled [`RegionLabel::Edge`].
pub const EDGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionLabel {
    /// Singular continuous side (`criterion > 1`).
    #[serde(rename = "SC")]
    SingularContinuous,
    /// Pure point side (`criterion < 1`).
    #[serde(rename = "PP")]
    PurePoint,
    #[serde(rename = "EDGE")]
    Edge,
    /// `lambda = 2 cos(pi p/q)` for a small denominator `q`.
    #[serde(rename = "EXCLUDED")]
    Excluded,
}

impl RegionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLabel::SingularContinuous => "SC",
            RegionLabel::PurePoint => "PP",
            RegionLabel::Edge => "EDGE",
            RegionLabel::Excluded => "EXCLUDED",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionClassification {
    pub label: RegionLabel,
    pub criterion_value: f64,
}

/// Floating-point stand-in for the exceptional set `2 cos(pi Q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalExclusion {
    pub max_denominator: u32,
    pub tolerance: f64,
}

impl Default for RationalExclusion {
    fn default() -> Self {
        RationalExclusion {
            max_denominator: 64,
            tolerance: 1e-9,
        }
    }
}

impl RationalExclusion {
    /// Reduced `(p, q)` with `|alpha/pi - p/q| <= tolerance`, smallest `q`.
    pub fn detect(&self, alpha: f64) -> Option<(u32, u32)> {
        let x = alpha / PI;
        (1..=self.max_denominator).find_map(|q| {
            let p = (x * q as f64).round();
            ((x - p / q as f64).abs() <= self.tolerance).then_some((p as u32, q))
        })
    }
}

pub fn criterion_value(lambda: f64, v: f64, beta_base: u32) -> f64 {
    (beta_base as f64 - 1.0) * (4.0 - lambda * lambda) / (v * v)
}

fn check_band(lambda: f64) -> Result<()> {
    if !(-2.0..=2.0).contains(&lambda) {
        return Err(Error::invalid(format!(
            "energy {lambda} lies outside the band [-2, 2]"
        )));
    }
    Ok(())
}

fn label_from_criterion(c: f64) -> RegionLabel {
    if c > 1.0 + EDGE_TOLERANCE {
        RegionLabel::SingularContinuous
    } else if c < 1.0 - EDGE_TOLERANCE {
        RegionLabel::PurePoint
    } else {
        RegionLabel::Edge
    }
}

/// Criterion-only classification; no rational-angle exclusion.
pub fn classify_energy(lambda: f64, params: &SparseModelParams) -> Result<RegionClassification> {
    check_band(lambda)?;
    let criterion_value = criterion_value(lambda, params.v, params.beta_base);
    Ok(RegionClassification {
        label: label_from_criterion(criterion_value),
        criterion_value,
    })
}

/// Like [`classify_energy`], with `Excluded` overriding the label when
/// `alpha / pi` is close to a rational with small denominator.
pub fn classify_energy_excluding(
    lambda: f64,
    params: &SparseModelParams,
    exclusion: &RationalExclusion,
) -> Result<RegionClassification> {
    let mut c = classify_energy(lambda, params)?;
    let alpha = (0.5 * lambda).clamp(-1.0, 1.0).acos();
    if exclusion.detect(alpha).is_some() {
        c.label = RegionLabel::Excluded;
    }
    Ok(c)
}

/// Window `(lambda_-, lambda_+)` of the s.c. side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MobilityEdges {
    Edges { lower: f64, upper: f64 },
    /// `v >= v_c`: the whole band is on the p.p. side.
    NoScWindow,
}

/// Critical disorder `v_c = 2 sqrt(beta - 1)`.
pub fn critical_disorder(beta_base: u32) -> f64 {
    2.0 * (beta_base as f64 - 1.0).sqrt()
}

/// `lambda_pm = pm 2 sqrt(1 - v^2 / v_c^2)`, where the criterion equals 1.
pub fn mobility_edges(v: f64, beta_base: u32) -> Result<MobilityEdges> {
    if beta_base < 2 {
        return Err(Error::invalid("beta must be >= 2"));
    }
    if !(v > 0.0) {
        return Err(Error::invalid(format!("v must be positive, got {v}")));
    }
    let vc = critical_disorder(beta_base);
    if v >= vc {
        return Ok(MobilityEdges::NoScWindow);
    }
    let upper = 2.0 * (1.0 - (v / vc).powi(2)).sqrt();
    Ok(MobilityEdges::Edges {
        lower: -upper,
        upper,
    })
}
