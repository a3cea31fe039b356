use qdlab::kronecker_2d::{estimate_local_alphas, l2_saturation_test, spectral_windows, KroneckerParams};
use qdlab::numeric::{linear_grid, log_grid};
use qdlab::sparse_jacobi::{mobility_edges, MobilityEdges, SparseModelParams};
use qdlab::spectral_dynamics::dyadic_scales;

use super::jacobi::bumps_covering;
use super::{horizon_range, require};
use crate::config::KroneckerConfig;
use crate::table::{flag, num, Table};
use crate::{CliError, Outcome};

/// Local dimensions are read off windows of width `2^-2 .. 2^-5`.
const ALPHA_SCALES: (u32, u32) = (2, 5);

pub fn run(c: &KroneckerConfig, seed: u64) -> Result<Outcome, CliError> {
    horizon_range(c.tmin, c.tmax, c.points)?;
    require(c.alpha_points >= 2, "alpha_points must be >= 2")?;
    let m = &c.model;
    let shared = SparseModelParams::new(m.beta, m.v, m.phi, bumps_covering(m.beta, c.n)?, seed)?;
    let kp = KroneckerParams::build(shared, c.theta)?;
    let (mu1, mu2) = kp.factor_measures(c.n)?;

    let alphas = match mobility_edges(m.v, m.beta)? {
        MobilityEdges::Edges { lower, upper } => {
            let grid = linear_grid(0.95 * lower, 0.95 * upper, c.alpha_points);
            let scales = dyadic_scales(ALPHA_SCALES.0, ALPHA_SCALES.1);
            Some(estimate_local_alphas(&mu1, &grid, &scales)?)
        }
        MobilityEdges::NoScWindow => None,
    };
    let report = spectral_windows(m.v, m.beta, c.theta, Some(c.hypothesis_constant), alphas.as_deref())?;
    let saturation = l2_saturation_test(&mu1, &mu2, c.theta, &log_grid(c.tmin, c.tmax, c.points))?;

    let header = format!(
        "beta = {}, v = {}, phi = {}, theta = {}, n = {}, a = {}",
        m.beta, m.v, m.phi, c.theta, c.n, c.hypothesis_constant
    );
    let mut windows = Table::new(
        "kronecker_windows",
        "spectral windows of J1 (x) I + theta I (x) J2",
        &[
            ("region", "band, pp (edge interval) or ac_candidate (central 2 alpha > 1 run)"),
            ("lower", "left end"),
            ("upper", "right end"),
        ],
    );
    windows.note(header.clone());
    windows.push(vec!["band".into(), num(report.band.0), num(report.band.1)]);
    for &(lo, hi) in &report.pp_region {
        windows.push(vec!["pp".into(), num(lo), num(hi)]);
    }
    if let Some((lo, hi)) = report.ac_candidate {
        windows.push(vec!["ac_candidate".into(), num(lo), num(hi)]);
    }

    let mut summary = Table::new(
        "kronecker_summary",
        "hypothesis checks and L2 saturation verdict",
        &[
            ("theta", "coupling of the second factor"),
            ("hypothesis_satisfied", "v^2 < a (sqrt(beta) - 1)"),
            ("sc_unknown", "presence of s.c. spectrum in the central window is undecided"),
            ("theta_resonance_flag", "theta within 1e-9 of p/q with q <= 16"),
            ("saturation_verdict", "Bounded, Linear or Intermediate growth of I(T)"),
            ("normalized_slope", "late slope of I(T) divided by (mass1 mass2)^2"),
            ("diagnostic", "reason the hypothesis fails, if it does"),
        ],
    );
    summary.note(header.clone());
    summary.push(vec![
        num(report.theta),
        flag(report.hypothesis_satisfied),
        flag(report.sc_unknown),
        flag(report.theta_resonance_flag),
        format!("{:?}", saturation.verdict),
        num(saturation.normalized_slope),
        report.diagnostic.clone().unwrap_or_default(),
    ]);

    let mut growth = Table::new(
        "kronecker_saturation",
        "L2 growth of the product amplitude",
        &[
            ("horizon", "T"),
            ("integral", "I(T) = int_0^T |mu1^(t) mu2^(theta t)|^2 dt"),
        ],
    );
    growth.note(header.clone());
    for (t, i) in saturation.horizons.iter().zip(&saturation.integrals) {
        growth.push(vec![num(*t), num(*i)]);
    }

    let mut tables = vec![windows, summary, growth];
    if let Some(alphas) = &alphas {
        let mut t = Table::new(
            "kronecker_alpha",
            "local dimension of the first factor's spectral measure inside its s.c. window",
            &[("lambda", "energy"), ("alpha", "local scaling exponent of mu1 at lambda")],
        );
        t.note(header);
        for &(l, a) in alphas {
            t.push(vec![num(l), num(a)]);
        }
        tables.push(t);
    }
    Ok(Outcome {
        tables,
        summary: vec![
            format!(
                "band [{}, {}], hypothesis satisfied: {}",
                num(report.band.0),
                num(report.band.1),
                report.hypothesis_satisfied
            ),
            format!(
                "saturation verdict {:?} (normalized slope {})",
                saturation.verdict,
                num(saturation.normalized_slope)
            ),
        ],
    })
}
