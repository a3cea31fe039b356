use qdlab::ensembles::{moment_bound_check, CouplingDistribution};
use qdlab::numeric::mean_stderr;
use qdlab::stream::Streams;

use super::require;
use crate::config::EnsembleCheckConfig;
use crate::table::{flag, num, Table};
use crate::{CliError, Outcome};

pub fn check(c: &EnsembleCheckConfig, seed: u64) -> Result<Outcome, CliError> {
    require(c.samples >= 2, "samples must be >= 2")?;
    let bound = moment_bound_check(&c.distribution, c.n_max)?;
    let mut rng = Streams::new(seed).stream("ensemble-check", 0);
    let draws: Vec<f64> = (0..c.samples).map(|_| c.distribution.sample(&mut rng)).collect();
    let variance = match c.distribution {
        CouplingDistribution::Gaussian { variance } => variance,
        CouplingDistribution::Bernoulli => 1.0,
        CouplingDistribution::Uniform => 1.0 / 3.0,
    };

    let mut moments = Table::new(
        "ensemble_moments",
        "exact and sampled moments of the coupling law against n! c^n",
        &[
            ("n", "moment order"),
            ("exact_moment", "E[J^n]"),
            ("sample_moment", "mean of J^n over the draws"),
            ("sample_stderr", "standard error of sample_moment"),
            ("factorial_bound", "n! c^n with the minimal c"),
        ],
    );
    moments.note(format!("distribution {}, {} draws", c.distribution.name(), c.samples));
    let mut factorial = 1.0;
    for n in 1..=c.n_max {
        factorial *= n as f64;
        let powers: Vec<f64> = draws.iter().map(|x| x.powi(n as i32)).collect();
        let (mean, err) = mean_stderr(&powers);
        moments.push(vec![
            n.to_string(),
            num(c.distribution.moment(n)),
            num(mean),
            num(err),
            num(factorial * bound.minimal_c.powi(n as i32)),
        ]);
    }

    let mut summary = Table::new(
        "ensemble_summary",
        "moment condition |E J^n| <= n! c^n for n = 2..n_max",
        &[
            ("distribution", "coupling law"),
            ("variance", "E[J^2]"),
            ("bounded_support", "support is a bounded set"),
            ("minimal_c", "smallest c satisfying the bound at every tested order"),
            ("binding_order", "order at which the bound is tight"),
            ("n_max", "highest order tested"),
        ],
    );
    summary.push(vec![
        c.distribution.name().into(),
        num(variance),
        flag(c.distribution.has_bounded_support()),
        num(bound.minimal_c),
        bound.binding_order.to_string(),
        c.n_max.to_string(),
    ]);
    Ok(Outcome {
        tables: vec![moments, summary],
        summary: vec![format!(
            "{}: minimal c = {} (binding at n = {})",
            c.distribution.name(),
            num(bound.minimal_c),
            bound.binding_order
        )],
    })
}
