//! The separable planar operator `J1 (x) I + theta I (x) J2` built from two
//! independent half-line realizations. Its dynamics factorizes, so most
//! quantities reduce to products of one-dimensional spectral data.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Eigendecomposition;
use crate::sparse_jacobi::{mobility_edges, truncated_spectrum, MobilityEdges, SparseModelParams, SparsePotential};
use crate::spectral_dynamics::{fs_transform, local_dimension, spectral_measure, AtomicMeasure};
use crate::stream::Streams;

/// Largest denominator for which `theta` is flagged as a resonance hazard.
pub const THETA_FLAG_DENOMINATOR: u32 = 16;

/// Default for the free constant `a < 4` in the hypothesis `v^2 < a (sqrt(beta) - 1)`.
pub const DEFAULT_HYPOTHESIS_CONSTANT: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct KroneckerParams {
    pub theta: f64,
    pub realization_1: SparsePotential,
    pub realization_2: SparsePotential,
    pub shared: SparseModelParams,
}

impl KroneckerParams {
    /// Draws the two factors from disjoint substreams of `shared.seed`.
    pub fn build(shared: SparseModelParams, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::invalid(format!("theta must lie in [0, 1], got {theta}")));
        }
        let root = Streams::new(shared.seed);
        let realization_1 = SparsePotential::build_from_streams(&shared, &root.child("factor", 1))?;
        let realization_2 = SparsePotential::build_from_streams(&shared, &root.child("factor", 2))?;
        Ok(KroneckerParams {
            theta,
            realization_1,
            realization_2,
            shared,
        })
    }

    /// Spectral measures of the first site of each truncated factor.
    pub fn factor_measures(&self, n: usize) -> Result<(AtomicMeasure, AtomicMeasure)> {
        let m1 = first_site_measure(&truncated_spectrum(&self.realization_1, n, self.shared.phi)?)?;
        let m2 = first_site_measure(&truncated_spectrum(&self.realization_2, n, self.shared.phi)?)?;
        Ok((m1, m2))
    }
}

fn first_site_measure(eig: &Eigendecomposition) -> Result<AtomicMeasure> {
    let mut e0 = vec![0.0; eig.dim()];
    e0[0] = 1.0;
    spectral_measure(eig, &e0)
}

/// `(Phi, exp(-itJ) Psi)` for product vectors: `mu1^(t) mu2^(theta t)`.
pub fn product_amplitude(mu1: &AtomicMeasure, mu2: &AtomicMeasure, theta: f64, t: f64) -> Complex64 {
    fs_transform(mu1, t) * fs_transform(mu2, theta * t)
}

/// Band geometry and spectral windows of the planar operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowReport {
    pub theta: f64,
    pub band: (f64, f64),
    /// Two edge intervals, `[-2(1+theta), l-(1+theta))` and its mirror.
    /// Empty when the one-dimensional factor has no s.c. window.
    pub pp_region: Vec<(f64, f64)>,
    /// Central interval produced by the `2 alpha > 1` indicator.
    pub ac_candidate: Option<(f64, f64)>,
    /// Whether singular continuous spectrum lives in the central window
    /// is never decided here.
    pub sc_unknown: bool,
    pub hypothesis_satisfied: bool,
    pub diagnostic: Option<String>,
    /// `theta` is close to a rational with denominator <= 16.
    pub theta_resonance_flag: bool,
}

/// Builds the window report. `hypothesis_constant` is the free constant
/// `a` (must be <= 4); `alpha_estimates` are `(lambda, alpha)` pairs of
/// the first factor on a grid inside its s.c. window.
pub fn spectral_windows(
    v: f64,
    beta_base: u32,
    theta: f64,
    hypothesis_constant: Option<f64>,
    alpha_estimates: Option<&[(f64, f64)]>,
) -> Result<WindowReport> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::invalid(format!("theta must lie in [0, 1], got {theta}")));
    }
    let a = hypothesis_constant.unwrap_or(DEFAULT_HYPOTHESIS_CONSTANT);
    if !(a > 0.0 && a <= 4.0) {
        return Err(Error::invalid(format!("hypothesis constant must lie in (0, 4], got {a}")));
    }
    let scale = 1.0 + theta;
    let edges = mobility_edges(v, beta_base)?;
    let bound = a * ((beta_base as f64).sqrt() - 1.0);
    let hypothesis_satisfied = v * v < bound;

    let pp_region = match edges {
        MobilityEdges::Edges { lower, upper } => {
            vec![(-2.0 * scale, lower * scale), (upper * scale, 2.0 * scale)]
        }
        MobilityEdges::NoScWindow => Vec::new(),
    };

    let mut diagnostic = None;
    let mut ac_candidate = None;
    if !hypothesis_satisfied {
        diagnostic = Some(format!(
            "hypothesis violated: v^2 = {:.6} >= a (sqrt(beta) - 1) = {:.6}",
            v * v,
            bound
        ));
    } else if let (Some(est), MobilityEdges::Edges { lower, upper }) = (alpha_estimates, edges) {
        let inside: Vec<(f64, f64)> = est
            .iter()
            .copied()
            .filter(|&(l, _)| l > lower && l < upper)
            .collect();
        if inside.is_empty() {
            diagnostic = Some("no alpha estimates inside the s.c. window".into());
        } else if let Some((lo, hi)) = two_alpha_indicator(&inside)? {
            ac_candidate = Some((lo * scale, hi * scale));
        }
    }

    Ok(WindowReport {
        theta,
        band: (-2.0 * scale, 2.0 * scale),
        pp_region,
        ac_candidate,
        sc_unknown: true,
        hypothesis_satisfied,
        diagnostic,
        theta_resonance_flag: small_denominator(theta, THETA_FLAG_DENOMINATOR).is_some(),
    })
}

/// Longest run of consecutive grid points (sorted by `lambda`) with
/// `2 alpha > 1`, returned as its first and last grid point.
pub fn two_alpha_indicator(alpha_estimates: &[(f64, f64)]) -> Result<Option<(f64, f64)>> {
    if alpha_estimates.is_empty() {
        return Err(Error::InsufficientData("empty alpha grid".into()));
    }
    let mut grid = alpha_estimates.to_vec();
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for (k, &(_, alpha)) in grid.iter().enumerate() {
        if 2.0 * alpha > 1.0 {
            let s = *start.get_or_insert(k);
            if best.is_none_or(|(b0, b1)| k - s > b1 - b0) {
                best = Some((s, k));
            }
        } else {
            start = None;
        }
    }
    Ok(best.map(|(a, b)| (grid[a].0, grid[b].0)))
}

/// Local scaling exponents of `mu` on a grid of energies.
pub fn estimate_local_alphas(mu: &AtomicMeasure, lambdas: &[f64], scales: &[f64]) -> Result<Vec<(f64, f64)>> {
    lambdas
        .par_iter()
        .map(|&l| local_dimension(mu, l, scales).map(|a| (l, a)))
        .collect()
}

/// `k / golden ratio mod 1` for `k = 1..=count`.
pub fn theta_sequence(count: usize) -> Vec<f64> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    (1..=count).map(|k| (k as f64 * g).fract()).collect()
}

/// Reduced `(p, q)` with `|x - p/q| <= 1e-9` and `q <= max_q`, if any.
pub fn small_denominator(x: f64, max_q: u32) -> Option<(u64, u32)> {
    (1..=max_q).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() <= 1e-9).then_some((p as u64, q))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SaturationVerdict {
    /// `I(T)` stays bounded: consistent with an absolutely continuous measure.
    Bounded,
    /// Linear growth at full rate: the product measure is atomic.
    Linear,
    Intermediate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaturationReport {
    pub horizons: Vec<f64>,
    /// `I(T) = int_0^T |f1(t) f2(theta t)|^2 dt`.
    pub integrals: Vec<f64>,
    /// Mean growth rate of `I` over the last decade of horizons.
    pub late_slope: f64,
    /// `late_slope / (mass1 mass2)^2`.
    pub normalized_slope: f64,
    pub verdict: SaturationVerdict,
}

const BOUNDED_SLOPE: f64 = 0.1;
const LINEAR_SLOPE: f64 = 0.9;

/// Integrates the squared product amplitude with composite Simpson
/// panels fine enough for the largest frequency present.
pub fn l2_saturation_test(
    mu1: &AtomicMeasure,
    mu2: &AtomicMeasure,
    theta: f64,
    horizons: &[f64],
) -> Result<SaturationReport> {
    if horizons.len() < 2 {
        return Err(Error::InsufficientData("need at least two horizons".into()));
    }
    if horizons[0] <= 0.0 || horizons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("horizons must be positive and increasing"));
    }
    let spread = |m: &AtomicMeasure| match (m.support().first(), m.support().last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    };
    let max_freq = 2.0 * (spread(mu1) + theta.abs() * spread(mu2));
    let h = if max_freq > 0.0 {
        (std::f64::consts::PI / (8.0 * max_freq)).min(0.05)
    } else {
        0.05
    };
    let density = |t: f64| product_amplitude(mu1, mu2, theta, t).norm_sqr();

    let mut edges = Vec::with_capacity(horizons.len() + 1);
    edges.push(0.0);
    edges.extend_from_slice(horizons);
    let panels: Vec<f64> = edges
        .par_windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let mut n = ((b - a) / h).ceil() as usize;
            n += n % 2;
            n = n.max(2);
            let step = (b - a) / n as f64;
            let mut s = density(a) + density(b);
            for k in 1..n {
                let c = if k % 2 == 1 { 4.0 } else { 2.0 };
                s += c * density(a + k as f64 * step);
            }
            s * step / 3.0
        })
        .collect();
    let integrals: Vec<f64> = panels
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();

    let last = horizons.len() - 1;
    let t_max = horizons[last];
    let first = horizons
        .iter()
        .rposition(|&t| t <= t_max / 10.0)
        .unwrap_or(0)
        .min(last - 1);
    let late_slope = (integrals[last] - integrals[first]) / (t_max - horizons[first]);
    let full = (mu1.mass() * mu2.mass()).powi(2);
    let normalized_slope = if full > 0.0 { late_slope / full } else { 0.0 };
    let verdict = if normalized_slope < BOUNDED_SLOPE {
        SaturationVerdict::Bounded
    } else if normalized_slope > LINEAR_SLOPE {
        SaturationVerdict::Linear
    } else {
        SaturationVerdict::Intermediate
    };
    Ok(SaturationReport {
        horizons: horizons.to_vec(),
        integrals,
        late_slope,
        normalized_slope,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{linear_grid, log_grid};
    use crate::sparse_jacobi::{classify_energy, RegionLabel};
    use proptest::prelude::*;

    fn smooth_proxy(m: usize, lo: f64, hi: f64) -> AtomicMeasure {
        // Midpoint atoms of a semicircle-like density on [lo, hi].
        let xs: Vec<f64> = (0..m).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / m as f64).collect();
        let raw: Vec<f64> = xs
            .iter()
            .map(|x| {
                let u = 2.0 * (x - lo) / (hi - lo) - 1.0;
                (1.0 - u * u).sqrt()
            })
            .collect();
        let total: f64 = raw.iter().sum();
        AtomicMeasure::new(xs, raw.iter().map(|w| w / total).collect()).unwrap()
    }

    #[test]
    fn theta_zero_reduces_to_first_factor() {
        let mu1 = AtomicMeasure::new(vec![-0.3, 0.8], vec![0.25, 0.5]).unwrap();
        let mu2 = AtomicMeasure::new(vec![0.1, 1.7, 2.2], vec![0.2, 0.3, 0.1]).unwrap();
        for t in [0.0, 0.7, 3.3, 41.0] {
            let lhs = product_amplitude(&mu1, &mu2, 0.0, t);
            let rhs = fs_transform(&mu1, t) * mu2.mass();
            assert!((lhs - rhs).norm() < 1e-14);
        }
        let at_zero = product_amplitude(&mu1, &mu2, 0.37, 0.0);
        assert!((at_zero.re - 0.75 * 0.6).abs() < 1e-15 && at_zero.im.abs() < 1e-15);
    }

    #[test]
    fn single_atoms_add_phases() {
        let (l1, l2, theta) = (0.4, -1.3, 0.61);
        let mu1 = AtomicMeasure::point_mass(l1, 1.0);
        let mu2 = AtomicMeasure::point_mass(l2, 1.0);
        for t in [0.5, 2.0, 17.0] {
            let a = product_amplitude(&mu1, &mu2, theta, t);
            let expected = Complex64::from_polar(1.0, -(l1 + theta * l2) * t);
            assert!((a - expected).norm() < 1e-13);
            assert!((a.norm() - 1.0).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn amplitude_bounded_by_masses(
            w1 in proptest::collection::vec(0.0f64..1.0, 1..6),
            w2 in proptest::collection::vec(0.0f64..1.0, 1..6),
            theta in 0.0f64..1.0,
            t in -50.0f64..50.0,
        ) {
            let x1: Vec<f64> = (0..w1.len()).map(|k| -1.9 + 0.7 * k as f64).collect();
            let x2: Vec<f64> = (0..w2.len()).map(|k| 1.5 - 0.55 * k as f64).collect();
            let mu1 = AtomicMeasure::new(x1, w1).unwrap();
            let mu2 = AtomicMeasure::new(x2, w2).unwrap();
            let bound = mu1.mass() * mu2.mass();
            prop_assert!(product_amplitude(&mu1, &mu2, theta, t).norm() <= bound * (1.0 + 1e-12) + 1e-15);
            prop_assert!((product_amplitude(&mu1, &mu2, theta, 0.0).norm() - bound).abs() <= 1e-12);
        }

        #[test]
        fn pp_region_is_symmetric(v in 0.05f64..1.5, beta in 2u32..9, theta in 0.0f64..1.0) {
            let r = spectral_windows(v, beta, theta, None, None).unwrap();
            prop_assert_eq!(r.band.0, -r.band.1);
            if r.pp_region.len() == 2 {
                prop_assert_eq!(r.pp_region[0].0, -r.pp_region[1].1);
                prop_assert_eq!(r.pp_region[0].1, -r.pp_region[1].0);
            }
            prop_assert!(r.sc_unknown);
        }
    }

    #[test]
    fn window_endpoints_at_theta_zero() {
        let r = spectral_windows(1.0, 4, 0.0, None, None).unwrap();
        let edge = (4.0f64 - 1.0 / 3.0).sqrt();
        assert_eq!(r.band, (-2.0, 2.0));
        assert_eq!(r.pp_region[0].0, -2.0);
        assert_eq!(r.pp_region[1].1, 2.0);
        assert!((r.pp_region[0].1 + edge).abs() < 1e-14);
        assert!((r.pp_region[1].0 - edge).abs() < 1e-14);
        assert!(r.hypothesis_satisfied);
    }

    #[test]
    fn theta_one_doubles_band() {
        for (v, beta) in [(0.3, 2), (1.0, 4), (0.9, 3)] {
            let r = spectral_windows(v, beta, 1.0, None, None).unwrap();
            assert_eq!(r.band, (-4.0, 4.0));
        }
    }

    #[test]
    fn violated_hypothesis_is_flagged() {
        let est = [(0.0, 1.0), (0.1, 1.0)];
        let r = spectral_windows(1.9, 2, 0.5, None, Some(&est)).unwrap();
        assert!(!r.hypothesis_satisfied);
        assert!(r.diagnostic.is_some());
        assert!(r.ac_candidate.is_none());
        assert!(r.sc_unknown);
    }

    #[test]
    fn tighter_constant_can_violate() {
        // v^2 = 0.64, sqrt(2) - 1 ~ 0.414: holds for a = 4, fails for a = 1.
        assert!(spectral_windows(0.8, 2, 0.3, None, None).unwrap().hypothesis_satisfied);
        assert!(!spectral_windows(0.8, 2, 0.3, Some(1.0), None).unwrap().hypothesis_satisfied);
        assert!(spectral_windows(0.8, 2, 0.3, Some(4.5), None).is_err());
    }

    #[test]
    fn theta_zero_matches_one_dimensional_classification() {
        let (v, beta) = (0.8, 3);
        let r = spectral_windows(v, beta, 0.0, None, None).unwrap();
        let params = SparseModelParams::new(beta, v, 0.0, 5, 1).unwrap();
        for l in linear_grid(-1.999, 1.999, 401) {
            let in_pp = r.pp_region.iter().any(|&(a, b)| l >= a && l <= b);
            let label = classify_energy(l, &params).unwrap().label;
            match label {
                RegionLabel::PurePoint => assert!(in_pp, "lambda {l}"),
                RegionLabel::SingularContinuous => assert!(!in_pp, "lambda {l}"),
                _ => {}
            }
        }
    }

    #[test]
    fn ac_candidate_sits_inside_central_window() {
        let (v, beta, theta) = (0.8, 3, 0.4);
        let lambdas = linear_grid(-1.9, 1.9, 39);
        let est: Vec<(f64, f64)> = lambdas.iter().map(|&l| (l, 1.0)).collect();
        let r = spectral_windows(v, beta, theta, None, Some(&est)).unwrap();
        let (lo, hi) = r.ac_candidate.unwrap();
        assert!(lo > r.pp_region[0].1 && hi < r.pp_region[1].0);
    }

    #[test]
    fn indicator_examples() {
        let grid = linear_grid(-1.0, 1.0, 21);
        let all_one: Vec<_> = grid.iter().map(|&l| (l, 1.0)).collect();
        assert_eq!(two_alpha_indicator(&all_one).unwrap(), Some((-1.0, 1.0)));
        let low: Vec<_> = grid.iter().map(|&l| (l, 0.4)).collect();
        assert_eq!(two_alpha_indicator(&low).unwrap(), None);
        // alpha = 0.5 + 0.3 (lambda - 0.23): crosses 1/2 at 0.23.
        let ramp: Vec<_> = grid.iter().map(|&l| (l, 0.5 + 0.3 * (l - 0.23))).collect();
        let (lo, hi) = two_alpha_indicator(&ramp).unwrap().unwrap();
        assert!((lo - 0.3).abs() < 1e-12);
        assert_eq!(hi, 1.0);
        assert!(two_alpha_indicator(&[]).is_err());
    }

    #[test]
    fn theta_sequence_and_flags() {
        let th = theta_sequence(200);
        assert!(th.iter().all(|&t| (0.0..1.0).contains(&t)));
        assert!(th.iter().all(|&t| small_denominator(t, THETA_FLAG_DENOMINATOR).is_none()));
        assert_eq!(small_denominator(0.25, 16), Some((1, 4)));
        assert!(spectral_windows(0.5, 2, 0.5, None, None).unwrap().theta_resonance_flag);
    }

    #[test]
    fn single_atoms_grow_linearly() {
        let mu = AtomicMeasure::point_mass(0.3, 1.0);
        let r = l2_saturation_test(&mu, &mu, 0.7, &log_grid(1.0, 1e3, 13)).unwrap();
        assert!((r.late_slope - 1.0).abs() < 1e-9);
        for (t, i) in r.horizons.iter().zip(&r.integrals) {
            assert!((i - t).abs() < 1e-8 * t);
        }
        assert_eq!(r.verdict, SaturationVerdict::Linear);
    }

    #[test]
    fn smooth_proxies_saturate() {
        let mu1 = smooth_proxy(400, -2.0, 2.0);
        let mu2 = smooth_proxy(400, -1.5, 1.5);
        let r = l2_saturation_test(&mu1, &mu2, 0.6, &log_grid(1.0, 300.0, 10)).unwrap();
        assert!(r.normalized_slope < 0.05, "slope {}", r.normalized_slope);
        assert_eq!(r.verdict, SaturationVerdict::Bounded);
    }

    #[test]
    fn atom_times_smooth_is_intermediate_fraction() {
        // Half the mass of mu1 sits on an atom; the rest is spread.
        let smooth = smooth_proxy(400, -2.0, 2.0);
        let mut xs = smooth.support().to_vec();
        let mut ws: Vec<f64> = smooth.weights().iter().map(|w| 0.5 * w).collect();
        xs.push(0.0123);
        ws.push(0.5);
        let mu1 = AtomicMeasure::new(xs, ws).unwrap();
        let r = l2_saturation_test(&mu1, &AtomicMeasure::point_mass(0.4, 1.0), 0.6, &log_grid(1.0, 300.0, 10)).unwrap();
        // Only the atom survives the average: slope -> 0.5^2.
        assert!((r.late_slope - 0.25).abs() < 0.02, "slope {}", r.late_slope);
    }

    #[test]
    fn two_by_two_atoms_match_weight_products() {
        let mu1 = AtomicMeasure::new(vec![-0.5, 0.9], vec![0.3, 0.7]).unwrap();
        let mu2 = AtomicMeasure::new(vec![-1.1, 0.6], vec![0.6, 0.4]).unwrap();
        let theta = 0.5 * (5f64.sqrt() - 1.0);
        let expected: f64 = mu1
            .weights()
            .iter()
            .flat_map(|a| mu2.weights().iter().map(move |b| (a * b).powi(2)))
            .sum();
        let r = l2_saturation_test(&mu1, &mu2, theta, &log_grid(10.0, 5e3, 12)).unwrap();
        assert!((r.late_slope / expected - 1.0).abs() < 0.05, "{} vs {expected}", r.late_slope);
    }

    #[test]
    fn factors_use_independent_streams() {
        let shared = SparseModelParams::new(2, 0.5, 0.0, 8, 77).unwrap();
        let k = KroneckerParams::build(shared, 0.3).unwrap();
        assert_ne!(k.realization_1.omegas, k.realization_2.omegas);
        let again = KroneckerParams::build(shared, 0.3).unwrap();
        assert_eq!(k, again);
        let (m1, m2) = k.factor_measures(64).unwrap();
        assert!((m1.mass() - 1.0).abs() < 1e-10 && (m2.mass() - 1.0).abs() < 1e-10);
        assert!(KroneckerParams::build(shared, 1.5).is_err());
    }
}
