//! One function per subcommand, each returning its result tables.

mod ea;
mod emch;
mod ensemble;
mod jacobi;
mod kronecker;

use crate::config::Command;
use crate::{CliError, Outcome};

pub use jacobi::bumps_covering;

pub fn dispatch(command: &Command, seed: u64) -> Result<Outcome, CliError> {
    match command {
        Command::Spectrum(c) => jacobi::spectrum(c, seed),
        Command::Prufer(c) => jacobi::prufer(c, seed),
        Command::Cesaro(c) => jacobi::cesaro(c, seed),
        Command::Cantor(c) => jacobi::cantor(c),
        Command::Kronecker(c) => kronecker::run(c, seed),
        Command::EaGroundState(c) => ea::ground_state(c, seed),
        Command::EaClusterBound(c) => ea::cluster_bound(c, seed),
        Command::EaScan(c) => ea::scan(c, seed),
        Command::EmchTrace(c) => emch::trace(c, seed),
        Command::EmchExact(c) => emch::exact(c, seed),
        Command::EmchStability(c) => emch::stability(c),
        Command::EnsembleCheck(c) => ensemble::check(c, seed),
    }
}

fn require(ok: bool, msg: impl Into<String>) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(msg.into()))
    }
}

/// Checks a `[tmin, tmax]` horizon range with `points` samples.
fn horizon_range(tmin: f64, tmax: f64, points: usize) -> Result<(), CliError> {
    require(
        tmin > 0.0 && tmax > tmin && tmax.is_finite(),
        format!("need 0 < tmin < tmax, got tmin = {tmin}, tmax = {tmax}"),
    )?;
    require(points >= 2, format!("need at least 2 horizons, got {points}"))
}
