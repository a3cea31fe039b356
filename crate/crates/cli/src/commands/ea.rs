use qdlab::ea_spin_glass::{
    cluster_lower_bound, energy_density_scan, ideal_energy, misfit, plaquette_frustrations,
    quantum_ground_energy, EAInstance, EigenMethod, Frustration, Lattice, Solver,
};
use qdlab::ensembles::CouplingDistribution;
use qdlab::stream::Streams;

use crate::config::{ClusterBoundConfig, EaGroundStateConfig, EaScanConfig};
use crate::table::{flag, num, opt, Table};
use crate::{CliError, Outcome};

fn solver_name(s: Solver) -> &'static str {
    match s {
        Solver::Exhaustive => "exhaustive",
        Solver::Transfer => "transfer",
        Solver::Auto => "auto",
    }
}

fn distribution_label(d: &CouplingDistribution) -> String {
    match d {
        CouplingDistribution::Gaussian { variance } => format!("gaussian:{}", num(*variance)),
        other => other.name().to_string(),
    }
}

pub fn ground_state(c: &EaGroundStateConfig, seed: u64) -> Result<Outcome, CliError> {
    let lattice = Lattice::new(c.d, c.side, c.boundary)?;
    let mut rng = Streams::new(seed).stream("ea-instance", 0);
    let instance = EAInstance::random(lattice, &c.distribution, c.anisotropy, &mut rng);
    // Zero couplings leave a plaquette's frustration undefined; the column is then empty.
    let frustrated = plaquette_frustrations(&instance)
        .map(|fs| fs.iter().filter(|f| **f == Frustration::Frustrated).count().to_string())
        .unwrap_or_default();
    let sites = instance.sites();
    let mut table = Table::new(
        "ea_ground_state",
        "ground state of one Edwards-Anderson instance, H = sum_bonds J_ij (ax X X + ay Y Y + az Z Z)",
        &[
            ("dimension", "lattice dimension"),
            ("side", "box side L"),
            ("boundary", "free or periodic"),
            ("sites", "number of spins L^d"),
            ("hamiltonian", "classical (Ising anisotropy) or quantum"),
            ("method", "solver used"),
            ("energy", "ground-state energy"),
            ("energy_per_site", "energy / sites"),
            ("degeneracy", "number of minimizing configurations (classical only)"),
            ("degeneracy_up_to_flip", "minimizers counted once per global flip pair (classical only)"),
            ("frustrated_plaquettes", "plaquettes whose coupling product is negative"),
            ("witness", "a minimizing configuration as +/- per site, first coordinate fastest (classical only)"),
        ],
    );
    table.note(format!(
        "distribution {}, anisotropy ({}, {}, {})",
        distribution_label(&c.distribution),
        c.anisotropy.x,
        c.anisotropy.y,
        c.anisotropy.z
    ));
    let head = vec![
        c.d.to_string(),
        c.side.to_string(),
        c.boundary.name().to_string(),
        sites.to_string(),
    ];
    let energy;
    if c.anisotropy.is_classical() {
        let gs = qdlab::ea_spin_glass::ground_state(&instance, c.solver)?;
        energy = gs.energy;
        let witness: String = gs.witness.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
        let mut row = head;
        row.extend([
            "classical".into(),
            solver_name(c.solver).into(),
            num(gs.energy),
            num(gs.energy / sites as f64),
            gs.degeneracy.to_string(),
            gs.degeneracy_up_to_flip.to_string(),
            frustrated,
            witness,
        ]);
        table.push(row);
    } else {
        let q = quantum_ground_energy(&instance)?;
        energy = q.energy;
        let method = match q.method {
            EigenMethod::Dense => "dense",
            EigenMethod::Lanczos => "lanczos",
        };
        let mut row = head;
        row.extend([
            "quantum".into(),
            method.into(),
            num(q.energy),
            num(q.energy / sites as f64),
            String::new(),
            String::new(),
            frustrated,
            String::new(),
        ]);
        table.push(row);
    }
    Ok(Outcome {
        tables: vec![table],
        summary: vec![format!(
            "E0 = {} ({} per site)",
            num(energy),
            num(energy / sites as f64)
        )],
    })
}

pub fn cluster_bound(c: &ClusterBoundConfig, seed: u64) -> Result<Outcome, CliError> {
    let b = cluster_lower_bound(c.d, &c.distribution, c.samples, seed)?;
    let m = match &b.exact {
        Some(_) => Some(misfit(ideal_energy(c.d), b.e0)?),
        None => None,
    };
    let mut table = Table::new(
        "ea_cluster_bound",
        "cluster lower bound on the disorder-averaged ground-state energy per site",
        &[
            ("dimension", "lattice dimension d"),
            ("distribution", "coupling law"),
            ("exact_rational", "c_d * (sum of cluster minima) / (coupling configurations), unreduced; +-1 couplings only"),
            ("reduced_rational", "the same fraction in lowest terms"),
            ("decimal", "E0 = c_d Av(min_sigma H_cluster)"),
            ("stderr", "Monte Carlo standard error (continuous laws only)"),
            ("samples", "Monte Carlo draws (continuous laws only)"),
            ("coupling_configs", "sign patterns enumerated (+-1 couplings only)"),
            ("misfit", "(d - |E0|) / d (+-1 couplings only)"),
        ],
    );
    table.note(format!("c_d = {}", num(b.c_d)));
    table.push(vec![
        c.d.to_string(),
        distribution_label(&c.distribution),
        b.exact.as_ref().map(|f| f.to_string()).unwrap_or_default(),
        b.exact.as_ref().map(|f| f.reduced().to_string()).unwrap_or_default(),
        num(b.e0),
        opt(b.stderr),
        b.samples.map(|s| s.to_string()).unwrap_or_default(),
        b.coupling_configs.map(|s| s.to_string()).unwrap_or_default(),
        opt(m),
    ]);
    let line = match &b.exact {
        Some(f) => format!("E0^({}) = {} = {}", c.d, f, num(b.e0)),
        None => format!("E0^({}) = {} +- {}", c.d, num(b.e0), opt(b.stderr)),
    };
    Ok(Outcome {
        tables: vec![table],
        summary: vec![line],
    })
}

pub fn scan(c: &EaScanConfig, seed: u64) -> Result<Outcome, CliError> {
    let scan = energy_density_scan(c.d, &c.sides, c.samples, &c.distribution, seed, c.solver)?;
    let mut table = Table::new(
        "ea_scan",
        "disorder-averaged ground-state energy per site against box size",
        &[
            ("dimension", "lattice dimension"),
            ("side", "box side L"),
            ("boundary", "free or periodic"),
            ("sites", "L^d"),
            ("samples", "disorder realizations"),
            ("mean_energy_per_site", "Av(E0) / L^d"),
            ("stderr", "standard error of the mean"),
            ("cluster_bound", "cluster lower bound E0 per site"),
            ("bound_respected", "mean >= cluster_bound - 3 stderr"),
        ],
    );
    table.note(format!(
        "distribution {}, solver {}",
        distribution_label(&c.distribution),
        solver_name(c.solver)
    ));
    for r in &scan.rows {
        table.push(vec![
            r.dimension.to_string(),
            r.side.to_string(),
            r.boundary.name().into(),
            r.sites.to_string(),
            r.samples.to_string(),
            num(r.mean_energy_per_site),
            num(r.stderr),
            num(r.cluster_bound),
            flag(r.bound_respected),
        ]);
    }
    let summary = scan
        .boundary_gaps()
        .iter()
        .map(|(side, gap)| format!("L = {side}: |free - periodic| = {}", num(*gap)))
        .collect();
    Ok(Outcome {
        tables: vec![table],
        summary,
    })
}
