use qdlab::numeric::log_grid;
use qdlab::sparse_jacobi::{
    boundary_vector, classify_energy_excluding, participation_ratio, prufer_evolve, transfer_product,
    truncated_spectrum, unperturbed_positions, RationalExclusion, SparseModelParams, SparsePotential,
};
use qdlab::spectral_dynamics::{
    cantor_dimension, cantor_measure, cantor_transform, cesaro_series, fit_decay_exponent, spectral_measure,
};
use qdlab::stream::Streams;

use super::{horizon_range, require};
use crate::config::{CantorConfig, CesaroConfig, JacobiArgs, PruferConfig, SpectrumConfig};
use crate::table::{num, Table};
use crate::{CliError, Outcome};

/// Smallest bump count whose bumps include every site below `n`.
pub fn bumps_covering(beta: u32, n: usize) -> qdlab::Result<usize> {
    let mut count = 1;
    loop {
        let a = unperturbed_positions(beta, count)?;
        if a[count - 1] >= (n + count) as u64 {
            return Ok(count);
        }
        count += 1;
    }
}

fn model(args: &JacobiArgs, bumps: usize, seed: u64) -> Result<SparseModelParams, CliError> {
    Ok(SparseModelParams::new(args.beta, args.v, args.phi, bumps, seed)?)
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    Some(if xs.len() % 2 == 0 { 0.5 * (xs[m - 1] + xs[m]) } else { xs[m] })
}

pub fn spectrum(c: &SpectrumConfig, seed: u64) -> Result<Outcome, CliError> {
    require(c.realizations >= 1, "realizations must be >= 1")?;
    let params = model(&c.model, bumps_covering(c.model.beta, c.n)?, seed)?;
    let root = Streams::new(seed);
    let exclusion = RationalExclusion::default();
    let mut table = Table::new(
        "spectrum",
        "eigenvalues of the truncated sparse Jacobi operator with their spectral-region labels",
        &[
            ("realization", "index of the disorder realization"),
            ("index", "eigenvalue index, ascending"),
            ("lambda", "eigenvalue"),
            ("classification", "SC if (beta-1)(4-lambda^2)/v^2 > 1, PP if < 1, EDGE, EXCLUDED near 2cos(pi p/q), OUTSIDE_BAND if |lambda| > 2"),
            ("criterion", "(beta-1)(4-lambda^2)/v^2, empty outside the band"),
            ("participation_ratio", "1 / sum_k psi_k^4 of the normalized eigenvector"),
        ],
    );
    table.note(format!("beta = {}, v = {}, phi = {}, n = {}", c.model.beta, c.model.v, c.model.phi, c.n));
    let (mut pr_pp, mut pr_sc) = (Vec::new(), Vec::new());
    for r in 0..c.realizations {
        let pot = SparsePotential::build_from_streams(&params, &root.child("realization", r as u64))?;
        let eig = truncated_spectrum(&pot, c.n, c.model.phi)?;
        for (k, &lambda) in eig.values.iter().enumerate() {
            let pr = participation_ratio(eig.vector(k));
            let (label, criterion) = if (-2.0..=2.0).contains(&lambda) {
                let cls = classify_energy_excluding(lambda, &params, &exclusion)?;
                match cls.label.as_str() {
                    "PP" => pr_pp.push(pr),
                    "SC" => pr_sc.push(pr),
                    _ => {}
                }
                (cls.label.as_str(), num(cls.criterion_value))
            } else {
                ("OUTSIDE_BAND", String::new())
            };
            table.push(vec![r.to_string(), k.to_string(), num(lambda), label.into(), criterion, num(pr)]);
        }
    }
    let show = |x: Option<f64>| x.map_or("n/a".to_string(), num);
    let summary = vec![
        format!("{} eigenvalues: {} PP, {} SC", table.rows.len(), pr_pp.len(), pr_sc.len()),
        format!(
            "median participation ratio: PP {}, SC {}",
            show(median(pr_pp)),
            show(median(pr_sc))
        ),
    ];
    Ok(Outcome {
        tables: vec![table],
        summary,
    })
}

pub fn prufer(c: &PruferConfig, seed: u64) -> Result<Outcome, CliError> {
    let params = model(&c.model, c.bumps, seed)?;
    let pot = SparsePotential::build(&params)?;
    let traj = prufer_evolve(c.lambda, &pot, c.model.phi)?;
    let direct = transfer_product(c.lambda, &pot, traj.final_site()) * boundary_vector(c.model.phi);
    let deviation = (direct - traj.final_solution()).norm() / direct.norm();
    let mut table = Table::new(
        "prufer",
        "Prufer radius and phase of the boundary solution just after each bump",
        &[
            ("bump", "bump number j, from 1"),
            ("site", "bump site a_j + omega_j"),
            ("omega", "random offset omega_j"),
            ("radius", "Prufer radius R at site a_j + omega_j + 1"),
            ("log_radius", "ln R"),
            ("phase", "Prufer phase in [0, 2pi)"),
        ],
    );
    table.note(format!(
        "beta = {}, v = {}, phi = {}, lambda = {}, initial radius = {}",
        c.model.beta,
        c.model.v,
        c.model.phi,
        c.lambda,
        num(traj.initial_radius)
    ));
    table.note(format!(
        "relative deviation from the direct transfer-matrix product at site {}: {}",
        traj.final_site(),
        num(deviation)
    ));
    for (j, ((&site, &omega), (&r, &phase))) in pot
        .positions
        .iter()
        .zip(&pot.omegas)
        .zip(traj.radii.iter().zip(&traj.phases))
        .enumerate()
    {
        table.push(vec![
            (j + 1).to_string(),
            site.to_string(),
            omega.to_string(),
            num(r),
            num(r.ln()),
            num(phase),
        ]);
    }
    let summary = vec![format!(
        "ln R after {} bumps: {}; cocycle deviation {}",
        c.bumps,
        num(traj.final_state.radius().ln()),
        num(deviation)
    )];
    Ok(Outcome {
        tables: vec![table],
        summary,
    })
}

pub fn cesaro(c: &CesaroConfig, seed: u64) -> Result<Outcome, CliError> {
    horizon_range(c.tmin, c.tmax, c.points)?;
    let params = model(&c.model, bumps_covering(c.model.beta, c.n)?, seed)?;
    let pot = SparsePotential::build(&params)?;
    let eig = truncated_spectrum(&pot, c.n, c.model.phi)?;
    let mut e0 = vec![0.0; c.n];
    e0[0] = 1.0;
    let mu = spectral_measure(&eig, &e0)?;
    let series = cesaro_series(&mu, &log_grid(c.tmin, c.tmax, c.points))?;
    let fit = fit_decay_exponent(&series)?;
    let mut table = Table::new(
        "cesaro",
        "Cesaro average of the squared Fourier-Stieltjes transform of the first-site spectral measure",
        &[
            ("horizon", "averaging horizon T"),
            ("cesaro_average", "(1/T) int_0^T |mu^(t)|^2 dt, closed form over atoms"),
        ],
    );
    table.note(format!("beta = {}, v = {}, phi = {}, n = {}", c.model.beta, c.model.v, c.model.phi, c.n));
    for (t, v) in series.horizons.iter().zip(&series.values) {
        table.push(vec![num(*t), num(*v)]);
    }
    let fit_table = fit_row(
        "cesaro_fit",
        "least-squares power law cesaro_average ~ prefactor * T^(-exponent)",
        fit,
        None,
    );
    Ok(Outcome {
        tables: vec![table, fit_table],
        summary: vec![format!("fitted decay exponent {}", num(fit.exponent))],
    })
}

fn fit_row(name: &str, title: &str, fit: qdlab::spectral_dynamics::DecayFit, reference: Option<f64>) -> Table {
    let mut columns = vec![
        ("exponent", "fitted decay exponent"),
        ("prefactor", "fitted prefactor"),
        ("residual", "rms residual of the log-log fit"),
    ];
    if reference.is_some() {
        columns.push(("reference_exponent", "log 2 / log 3"));
    }
    let mut t = Table::new(name, title, &columns);
    let mut row = vec![num(fit.exponent), num(fit.prefactor), num(fit.residual)];
    row.extend(reference.map(num));
    t.push(row);
    t
}

pub fn cantor(c: &CantorConfig) -> Result<Outcome, CliError> {
    horizon_range(c.tmin, c.tmax, c.points)?;
    require(c.transform_depth >= 1, "transform depth must be >= 1")?;
    let mu = cantor_measure(c.depth)?;
    let series = cesaro_series(&mu, &log_grid(c.tmin, c.tmax, c.points))?;
    let fit = fit_decay_exponent(&series)?;
    let mut decay = Table::new(
        "cantor_cesaro",
        "Cesaro decay of the middle-thirds Cantor measure on [-pi, pi]",
        &[
            ("horizon", "averaging horizon T"),
            ("cesaro_average", "(1/T) int_0^T |mu^(t)|^2 dt for the depth-limited atomic measure"),
            ("transform", "prod_j cos(2/3 T pi 3^(-j+1)) at the transform depth"),
        ],
    );
    decay.note(format!("depth = {}, transform depth = {}", c.depth, c.transform_depth));
    for (t, v) in series.horizons.iter().zip(&series.values) {
        decay.push(vec![num(*t), num(*v), num(cantor_transform(*t, c.transform_depth))]);
    }
    let mut similarity = Table::new(
        "cantor_similarity",
        "self-similarity of the Cantor transform Gamma at integers",
        &[
            ("n", "integer argument"),
            ("gamma_n", "Gamma(n)"),
            ("gamma_3n", "Gamma(3n)"),
            ("abs_diff", "|Gamma(n) - Gamma(3n)|"),
        ],
    );
    let mut worst: f64 = 0.0;
    for n in 1..=c.similarity_terms {
        let g1 = cantor_transform(n as f64, c.transform_depth);
        let g3 = cantor_transform(3.0 * n as f64, c.transform_depth);
        worst = worst.max((g1 - g3).abs());
        similarity.push(vec![n.to_string(), num(g1), num(g3), num((g1 - g3).abs())]);
    }
    let fit_table = fit_row(
        "cantor_fit",
        "least-squares power law for the Cantor Cesaro decay",
        fit,
        Some(cantor_dimension()),
    );
    Ok(Outcome {
        tables: vec![decay, similarity, fit_table],
        summary: vec![
            format!(
                "fitted exponent {} (log 2 / log 3 = {})",
                num(fit.exponent),
                num(cantor_dimension())
            ),
            format!("max |Gamma(n) - Gamma(3n)| = {}", num(worst)),
        ],
    })
}
