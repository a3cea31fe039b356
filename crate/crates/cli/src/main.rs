use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qdlab_cli::config::{
    CantorConfig, CesaroConfig, ClusterBoundConfig, EaGroundStateConfig, EaScanConfig, EmchExactConfig,
    EmchStabilityConfig, EmchTraceConfig, EnsembleCheckConfig, KroneckerConfig, PruferConfig, SpectrumConfig,
};
use qdlab_cli::{run, thread_count, CliError, Command, ExperimentConfig};

/// Numerical experiments on sparse random Jacobi operators, Edwards-Anderson
/// spin glasses and the disordered Emch-Radin model.
#[derive(Debug, Parser)]
#[command(name = "qdlab", version)]
struct Cli {
    /// Worker threads (0 = all logical cores); QDLAB_THREADS takes precedence.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Top,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory for the CSV tables, config and manifest.
    #[arg(long, default_value = "qdlab-out")]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Top {
    /// Eigenvalues, spectral labels and participation ratios.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        config: SpectrumConfig,
    },
    /// Prufer radius and phase through the bumps.
    Prufer {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        config: PruferConfig,
    },
    /// Cesaro decay of the first-site spectral measure.
    Cesaro {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        config: CesaroConfig,
    },
    /// Cantor-measure transform and Cesaro decay.
    Cantor {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        config: CantorConfig,
    },
    /// Spectral windows and L2 saturation of the planar product operator.
    Kronecker {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        config: KroneckerConfig,
    },
    /// Edwards-Anderson spin glass.
    Ea {
        #[command(subcommand)]
        command: EaCommand,
    },
    /// Disordered Emch-Radin dynamics.
    Emch {
        #[command(subcommand)]
        command: EmchCommand,
    },
    /// Coupling-law checks.
    Ensemble {
        #[command(subcommand)]
        command: EnsembleCommand,
    },
    /// Re-runs a saved config.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the output directory stored in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum EaCommand {
    /// Ground state of one random instance.
    GroundState {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        config: EaGroundStateConfig,
    },
    /// Cluster lower bound on the energy per site.
    ClusterBound {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        config: ClusterBoundConfig,
    },
    /// Energy density against box size.
    Scan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        config: EaScanConfig,
    },
}

#[derive(Debug, Subcommand)]
enum EmchCommand {
    /// Closed form against Monte Carlo.
    Trace {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        config: EmchTraceConfig,
    },
    /// Exact cluster evolution against the product formula.
    Exact {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        config: EmchExactConfig,
    },
    /// Stability classification.
    Stability {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        config: EmchStabilityConfig,
    },
}

#[derive(Debug, Subcommand)]
enum EnsembleCommand {
    /// Moment condition and sampled moments.
    Check {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        config: EnsembleCheckConfig,
    },
}

fn experiment(common: Common, command: Command) -> ExperimentConfig {
    ExperimentConfig {
        seed: common.seed,
        output: common.out,
        command,
    }
}

fn resolve(top: Top) -> Result<ExperimentConfig, CliError> {
    Ok(match top {
        Top::Spectrum { common, config } => experiment(common, Command::Spectrum(config)),
        Top::Prufer { common, config } => experiment(common, Command::Prufer(config)),
        Top::Cesaro { common, config } => experiment(common, Command::Cesaro(config)),
        Top::Cantor { common, config } => experiment(common, Command::Cantor(config)),
        Top::Kronecker { common, config } => experiment(common, Command::Kronecker(config)),
        Top::Ea { command } => match command {
            EaCommand::GroundState { common, config } => experiment(common, Command::EaGroundState(config)),
            EaCommand::ClusterBound { common, config } => experiment(common, Command::EaClusterBound(config)),
            EaCommand::Scan { common, config } => experiment(common, Command::EaScan(config)),
        },
        Top::Emch { command } => match command {
            EmchCommand::Trace { common, config } => experiment(common, Command::EmchTrace(config)),
            EmchCommand::Exact { common, config } => experiment(common, Command::EmchExact(config)),
            EmchCommand::Stability { common, config } => experiment(common, Command::EmchStability(config)),
        },
        Top::Ensemble {
            command: EnsembleCommand::Check { common, config },
        } => experiment(common, Command::EnsembleCheck(config)),
        Top::Run { config, out } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
            let mut cfg = ExperimentConfig::from_json(&text)?;
            if let Some(out) = out {
                cfg.output = out;
            }
            cfg
        }
    })
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    let threads = thread_count(cli.threads, std::env::var("QDLAB_THREADS").ok().as_deref())?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let config = resolve(cli.command)?;
    let report = run(&config)?;
    // A closed stdout (e.g. piped into `head`) is not an error.
    let mut out = std::io::stdout().lock();
    for line in &report.outcome.summary {
        let _ = writeln!(out, "{line}");
    }
    for f in &report.files {
        let _ = writeln!(out, "wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
