use qdlab::emch_radin::{
    closed_form_trace, decay_classify, exact_magnetization, mc_average_f, printed_form_f, stability_classify,
    DisorderedEmchModel, InteractionKernel, MagnetizationTrace,
};
use qdlab::numeric::linear_grid;

use super::require;
use crate::config::{EmchExactConfig, EmchStabilityConfig, EmchTraceConfig};
use crate::table::{flag, num, Table};
use crate::{CliError, Outcome};

fn time_grid(tmax: f64, points: usize) -> Result<Vec<f64>, CliError> {
    require(tmax > 0.0 && tmax.is_finite(), format!("tmax must be positive, got {tmax}"))?;
    require(points >= 2, format!("need at least 2 time points, got {points}"))?;
    Ok(linear_grid(0.0, tmax, points))
}

fn decay_row(source: &str, trace: &MagnetizationTrace) -> Vec<String> {
    match decay_classify(trace) {
        Ok(d) => vec![
            source.into(),
            d.label.as_str().into(),
            num(d.power_exponent),
            num(d.gaussian_rate),
            num(d.power_residual),
            num(d.gaussian_residual),
        ],
        Err(e) => vec![
            source.into(),
            "UNCLASSIFIED".into(),
            String::new(),
            String::new(),
            String::new(),
            e.to_string(),
        ],
    }
}

pub fn trace(c: &EmchTraceConfig, seed: u64) -> Result<Outcome, CliError> {
    require(
        matches!(c.z, 2 | 4 | 6),
        format!("coordination z must be 2, 4 or 6 (nearest neighbours on Z^(z/2)), got {}", c.z),
    )?;
    let times = time_grid(c.tmax, c.points)?;
    let model = DisorderedEmchModel {
        kernel: InteractionKernel::nearest_neighbor(c.z as usize / 2)?,
        distribution: c.distribution,
        beta_coupling: c.beta,
        gamma: c.gamma,
        volume_half_width: 1,
    };
    let closed = closed_form_trace(&model, &times)?;
    let mc = mc_average_f(&model, &times, c.samples, seed)?;
    let header = format!(
        "distribution {}, z = {}, beta = {}, gamma = {}, delta = {}, samples = {}",
        c.distribution.name(),
        c.z,
        c.beta,
        c.gamma,
        num(closed.delta),
        c.samples
    );
    let mut table = Table::new(
        "emch_trace",
        "transverse magnetization f(t) of the disordered Emch-Radin model",
        &[
            ("t", "time"),
            ("closed_form", "delta * Re phi_J(2 beta t)^z, the distribution-generic form"),
            ("mc_mean", "delta * sample mean of prod_k cos(2 beta J_k t)"),
            ("mc_stderr", "standard error of mc_mean"),
            ("printed_form", "delta * (cos(2t)^z, (sin 2t / 2t)^z or exp(-2 z t^2)), the unit-amplitude reference forms"),
        ],
    );
    table.note(header.clone());
    for (k, &t) in times.iter().enumerate() {
        table.push(vec![
            num(t),
            num(closed.values[k]),
            num(mc.values[k]),
            num(mc.stderr[k]),
            num(closed.delta * printed_form_f(&c.distribution, c.z, t)),
        ]);
    }
    let mut decay = Table::new(
        "emch_decay",
        "qualitative decay of f(t)",
        &[
            ("source", "closed_form or monte_carlo"),
            ("label", "ALMOST_PERIODIC, POWER_LAW or GAUSSIAN_LIKE"),
            ("power_exponent", "slope of log envelope against log t"),
            ("gaussian_rate", "slope of log envelope against t^2"),
            ("power_residual", "relative rms residual of the power-law fit"),
            ("gaussian_residual", "relative rms residual of the Gaussian fit, or the reason no label was assigned"),
        ],
    );
    decay.note(header);
    let closed_row = decay_row("closed_form", &closed);
    let mc_row = decay_row("monte_carlo", &mc);
    let worst = times
        .iter()
        .enumerate()
        .map(|(k, _)| {
            let diff = (mc.values[k] - closed.values[k]).abs();
            if mc.stderr[k] > 0.0 {
                diff / mc.stderr[k]
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max);
    let summary = vec![
        format!("decay: closed form {}, Monte Carlo {}", closed_row[1], mc_row[1]),
        format!("largest |mc - closed| / stderr = {}", num(worst)),
    ];
    decay.push(closed_row);
    decay.push(mc_row);
    Ok(Outcome {
        tables: vec![table, decay],
        summary,
    })
}

pub fn exact(c: &EmchExactConfig, seed: u64) -> Result<Outcome, CliError> {
    require(c.instances >= 1, "instances must be >= 1")?;
    let times = time_grid(c.tmax, c.points)?;
    let model = DisorderedEmchModel {
        kernel: c.kernel.build()?,
        distribution: c.distribution,
        beta_coupling: c.beta,
        gamma: c.gamma,
        volume_half_width: c.half_width,
    };
    let mut table = Table::new(
        "emch_exact",
        "exact evolution of <X_centre>(t) on a finite cluster against the product formula",
        &[
            ("instance", "cluster realization; instance i uses seed + i"),
            ("t", "time"),
            ("exact", "tr(rho_0 exp(-itH) X exp(itH)) from the computational-basis phases"),
            ("product_formula", "delta * prod_k cos(2 t g_k) over the couplings g_k of the centre"),
            ("abs_diff", "|exact - product_formula|"),
        ],
    );
    let mut worst: f64 = 0.0;
    let mut spins = 0;
    for i in 0..c.instances {
        let cluster = model.sample_cluster(seed.wrapping_add(i as u64))?;
        spins = cluster.spins;
        let centre = cluster.spins / 2;
        for &t in &times {
            let e = exact_magnetization(&cluster, c.gamma, centre, t)?;
            let p = cluster.product_formula(c.gamma, centre, t);
            worst = worst.max((e - p).abs());
            table.push(vec![i.to_string(), num(t), num(e), num(p), num((e - p).abs())]);
        }
    }
    table.note(format!(
        "{} spins, kernel {:?} on Z^{}, distribution {}, beta = {}, gamma = {}",
        spins,
        c.kernel.kernel,
        c.kernel.dimension,
        c.distribution.name(),
        c.beta,
        c.gamma
    ));
    Ok(Outcome {
        tables: vec![table],
        summary: vec![format!(
            "{} instances of {} spins: max |exact - product formula| = {}",
            c.instances,
            spins,
            num(worst)
        )],
    })
}

pub fn stability(c: &EmchStabilityConfig) -> Result<Outcome, CliError> {
    let kernel = c.kernel.build()?;
    let r = stability_classify(&kernel, &c.distribution)?;
    let mut table = Table::new(
        "emch_stability",
        "thermodynamic stability of the random Emch-Radin model",
        &[
            ("kernel", "interaction profile"),
            ("dimension", "lattice dimension"),
            ("distribution", "coupling law"),
            ("summability", "L1, L2_ONLY or NONE from dyadic partial sums"),
            ("analytic_summability", "class implied by the closed form, where known"),
            ("first_kind", "H_V bounded below for every realization"),
            ("second_kind", "H_V >= -c |V|"),
            ("stable", "free energy per site bounded below"),
            ("exponential_decay_excluded", "semibounded single-site Hamiltonian"),
            ("rationale", "reasons, semicolon separated"),
        ],
    );
    table.push(vec![
        format!("{:?}", kernel.shape),
        kernel.dimension.to_string(),
        c.distribution.name().into(),
        r.summability.as_str().into(),
        kernel.analytic_class().map(|s| s.as_str().to_string()).unwrap_or_default(),
        flag(r.first_kind),
        flag(r.second_kind),
        flag(r.stable),
        flag(r.exponential_decay_excluded),
        r.rationale.clone(),
    ]);
    Ok(Outcome {
        tables: vec![table],
        summary: vec![format!(
            "summability {}, stable {}, first kind {}, second kind {}",
            r.summability.as_str(),
            r.stable,
            r.first_kind,
            r.second_kind
        )],
    })
}
