//! Experiment configuration: one record per subcommand, shared by the
//! command-line parser and the JSON config files.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use qdlab::ea_spin_glass::{Anisotropy, BoundaryCondition, Solver};
use qdlab::emch_radin::{InteractionKernel, KernelShape};
use qdlab::ensembles::CouplingDistribution;

use crate::CliError;

/// A complete, self-describing run: re-running it reproduces the CSVs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub output: PathBuf,
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    Spectrum(SpectrumConfig),
    Prufer(PruferConfig),
    Cesaro(CesaroConfig),
    Cantor(CantorConfig),
    Kronecker(KroneckerConfig),
    EaGroundState(EaGroundStateConfig),
    EaClusterBound(ClusterBoundConfig),
    EaScan(EaScanConfig),
    EmchTrace(EmchTraceConfig),
    EmchExact(EmchExactConfig),
    EmchStability(EmchStabilityConfig),
    EnsembleCheck(EnsembleCheckConfig),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Prufer(_) => "prufer",
            Command::Cesaro(_) => "cesaro",
            Command::Cantor(_) => "cantor",
            Command::Kronecker(_) => "kronecker",
            Command::EaGroundState(_) => "ea ground-state",
            Command::EaClusterBound(_) => "ea cluster-bound",
            Command::EaScan(_) => "ea scan",
            Command::EmchTrace(_) => "emch trace",
            Command::EmchExact(_) => "emch exact",
            Command::EmchStability(_) => "emch stability",
            Command::EnsembleCheck(_) => "ensemble check",
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

fn parse_distribution(s: &str) -> Result<CouplingDistribution, String> {
    match s.split_once(':') {
        Some(("gaussian", var)) => {
            let v: f64 = var.parse().map_err(|_| format!("bad gaussian variance '{var}'"))?;
            CouplingDistribution::gaussian_with_variance(v).map_err(|e| e.to_string())
        }
        _ => CouplingDistribution::parse(s).map_err(|e| e.to_string()),
    }
}

fn parse_boundary(s: &str) -> Result<BoundaryCondition, String> {
    BoundaryCondition::parse(s).map_err(|e| e.to_string())
}

fn parse_solver(s: &str) -> Result<Solver, String> {
    Solver::parse(s).map_err(|e| e.to_string())
}

fn parse_anisotropy(s: &str) -> Result<Anisotropy, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("anisotropy must be three numbers 'x,y,z', got '{s}'"))?;
    match parts.as_slice() {
        [x, y, z] => Ok(Anisotropy { x: *x, y: *y, z: *z }),
        _ => Err(format!("anisotropy must be three numbers 'x,y,z', got '{s}'")),
    }
}

/// Sparse Jacobi model shared by the one-dimensional subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobiArgs {
    /// Sparseness base (integer >= 2).
    #[arg(long, default_value_t = 2)]
    pub beta: u32,
    /// Bump height, in (0, 1).
    #[arg(long, default_value_t = 0.9)]
    pub v: f64,
    /// Boundary phase, in [0, pi).
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    #[command(flatten)]
    pub model: JacobiArgs,
    /// Truncation size.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub realizations: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PruferConfig {
    #[command(flatten)]
    pub model: JacobiArgs,
    /// Energy inside (-2, 2).
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, default_value_t = 20)]
    pub bumps: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CesaroConfig {
    #[command(flatten)]
    pub model: JacobiArgs,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub tmin: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 16)]
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorConfig {
    /// Generation of the atomic approximation (2^depth atoms).
    #[arg(long, default_value_t = 12)]
    pub depth: u32,
    /// Number of factors in the transform product.
    #[arg(long, default_value_t = 60)]
    pub transform_depth: u32,
    #[arg(long, default_value_t = 10.0)]
    pub tmin: f64,
    #[arg(long, default_value_t = 10000.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 16)]
    pub points: usize,
    /// Integers n for the self-similarity table Gamma(n) vs Gamma(3n).
    #[arg(long, default_value_t = 100)]
    pub similarity_terms: u32,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KroneckerConfig {
    #[command(flatten)]
    pub model: JacobiArgs,
    /// Coupling of the second factor, in [0, 1].
    #[arg(long, default_value_t = 0.618_033_988_749_895)]
    pub theta: f64,
    /// Truncation size of each factor.
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    /// Constant `a` in the hypothesis `v^2 < a (sqrt(beta) - 1)`.
    #[arg(long, default_value_t = qdlab::kronecker_2d::DEFAULT_HYPOTHESIS_CONSTANT)]
    pub hypothesis_constant: f64,
    /// Energies at which the local dimension of the first factor is estimated.
    #[arg(long, default_value_t = 41)]
    pub alpha_points: usize,
    #[arg(long, default_value_t = 10.0)]
    pub tmin: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 8)]
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EaGroundStateConfig {
    /// Lattice dimension (2 or 3).
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 4)]
    pub side: usize,
    #[arg(long = "bc", default_value = "free", value_parser = parse_boundary)]
    pub boundary: BoundaryCondition,
    #[arg(long = "dist", default_value = "bernoulli", value_parser = parse_distribution)]
    pub distribution: CouplingDistribution,
    #[arg(long, default_value = "auto", value_parser = parse_solver)]
    pub solver: Solver,
    /// Pair anisotropy `x,y,z`; anything but `0,0,1` is solved quantum mechanically.
    #[arg(long, default_value = "0,0,1", value_parser = parse_anisotropy)]
    pub anisotropy: Anisotropy,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterBoundConfig {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long = "dist", default_value = "bernoulli", value_parser = parse_distribution)]
    pub distribution: CouplingDistribution,
    /// Monte Carlo draws for continuous coupling laws.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EaScanConfig {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
    pub sides: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long = "dist", default_value = "bernoulli", value_parser = parse_distribution)]
    pub distribution: CouplingDistribution,
    #[arg(long, default_value = "auto", value_parser = parse_solver)]
    pub solver: Solver,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    /// Unit coupling to the 2d nearest neighbours.
    Nn,
    /// `amplitude * |n|^(-exponent)`.
    PowerLaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelArgs {
    /// Lattice dimension of the kernel (1, 2 or 3).
    #[arg(long = "kernel-dim", default_value_t = 1)]
    pub dimension: usize,
    #[arg(long, value_enum, default_value_t = KernelKind::Nn)]
    pub kernel: KernelKind,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 2.0)]
    pub exponent: f64,
}

impl KernelArgs {
    pub fn build(&self) -> qdlab::Result<InteractionKernel> {
        match self.kernel {
            KernelKind::Nn => InteractionKernel::nearest_neighbor(self.dimension),
            KernelKind::PowerLaw => InteractionKernel::new(
                self.dimension,
                KernelShape::PowerLaw {
                    amplitude: self.amplitude,
                    exponent: self.exponent,
                },
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmchTraceConfig {
    #[arg(long = "dist", default_value = "bernoulli", value_parser = parse_distribution)]
    pub distribution: CouplingDistribution,
    /// Coordination number 2, 4 or 6 (nearest neighbours on Z^(z/2)).
    #[arg(long, default_value_t = 4)]
    pub z: u32,
    /// Coupling amplitude.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Initial-state parameter; delta = -tanh(gamma).
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 10.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmchExactConfig {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Box half width n: the cluster is [-n, n]^d.
    #[arg(long, default_value_t = 5)]
    pub half_width: usize,
    #[arg(long = "dist", default_value = "gaussian", value_parser = parse_distribution)]
    pub distribution: CouplingDistribution,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 20)]
    pub instances: usize,
    #[arg(long, default_value_t = 5.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmchStabilityConfig {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long = "dist", default_value = "bernoulli", value_parser = parse_distribution)]
    pub distribution: CouplingDistribution,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleCheckConfig {
    #[arg(long = "dist", default_value = "gaussian", value_parser = parse_distribution)]
    pub distribution: CouplingDistribution,
    /// Highest moment order checked.
    #[arg(long, default_value_t = 20)]
    pub n_max: u32,
    /// Draws used for the empirical moments.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distribution_syntax() {
        assert_eq!(parse_distribution("uniform").unwrap(), CouplingDistribution::Uniform);
        assert_eq!(
            parse_distribution("gaussian:2").unwrap(),
            CouplingDistribution::Gaussian { variance: 2.0 }
        );
        assert!(parse_distribution("gaussian:-1").is_err());
        assert!(parse_distribution("cauchy").is_err());
        assert!(parse_anisotropy("1,1").is_err());
        assert_eq!(parse_anisotropy("1, 1, 1").unwrap(), Anisotropy::HEISENBERG);
    }
}
