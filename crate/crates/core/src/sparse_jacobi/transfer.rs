//! Transfer matrices and Prüfer variables.
//!
//! The eigenvalue equation `u_{n+1} = (lambda - v_n) u_n - u_{n-1}` is
//! written as `(u_{n+1}, u_n) = T_n (u_n, u_{n-1})` with
//! `T_n = [[lambda - v_n, -1], [1, 0]]`. Inside the band,
//! `lambda = 2 cos(alpha)`, the coordinates
//! `w_n = (u_n - cos(alpha) u_{n-1}, sin(alpha) u_{n-1})` turn the free
//! step into a rotation by `alpha`; a bump adds the shear
//! `x -= v y / sin(alpha)` after the rotation.

use std::f64::consts::TAU;

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};

use super::potential::SparsePotential;

pub fn transfer_step(lambda: f64, v_n: f64) -> Matrix2<f64> {
    Matrix2::new(lambda - v_n, -1.0, 1.0, 0.0)
}

/// Initial vector `(u_0, u_{-1}) = (cos phi, sin phi)` satisfying the
/// boundary condition.
pub fn boundary_vector(phi: f64) -> Vector2<f64> {
    Vector2::new(phi.cos(), phi.sin())
}

fn matrix_power(m: &Matrix2<f64>, mut k: u64) -> Matrix2<f64> {
    let mut result = Matrix2::identity();
    let mut base = *m;
    while k > 0 {
        if k & 1 == 1 {
            result = base * result;
        }
        base = base * base;
        k >>= 1;
    }
    result
}

/// Product `T_{end-1} ... T_1 T_0` of one-step matrices, with free
/// stretches raised to powers by repeated squaring.
pub fn transfer_product(lambda: f64, pot: &SparsePotential, end: u64) -> Matrix2<f64> {
    let free = transfer_step(lambda, 0.0);
    let bump = transfer_step(lambda, pot.v);
    let mut acc = Matrix2::identity();
    let mut site = 0u64;
    for &p in pot.positions.iter().take_while(|&&p| p < end) {
        acc = matrix_power(&free, p - site) * acc;
        acc = bump * acc;
        site = p + 1;
    }
    matrix_power(&free, end - site) * acc
}

/// `k * alpha mod 2 pi` with the product's rounding error carried along,
/// so long free stretches keep their phase.
fn rotation_angle(k: u64, alpha: f64) -> f64 {
    let kf = k as f64;
    let p = kf * alpha;
    let err = kf.mul_add(alpha, -p);
    (p.rem_euclid(TAU) + err).rem_euclid(TAU)
}

/// Point in the elliptic coordinates where the free step is a rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PruferState {
    pub x: f64,
    pub y: f64,
}

impl PruferState {
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn phase(&self) -> f64 {
        self.y.atan2(self.x)
    }

    fn rotate(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        PruferState {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
        }
    }
}

/// Elliptic coordinates of one energy inside the band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PruferFrame {
    pub lambda: f64,
    pub alpha: f64,
    cos_a: f64,
    sin_a: f64,
}

impl PruferFrame {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda.abs() < 2.0) {
            return Err(Error::invalid(format!(
                "Prüfer coordinates need |lambda| < 2, got {lambda}"
            )));
        }
        let alpha = (0.5 * lambda).acos();
        Ok(PruferFrame {
            lambda,
            alpha,
            cos_a: 0.5 * lambda,
            sin_a: alpha.sin(),
        })
    }

    /// `(u_n, u_{n-1}) -> w_n`.
    pub fn to_prufer(&self, u: Vector2<f64>) -> PruferState {
        PruferState {
            x: u[0] - self.cos_a * u[1],
            y: self.sin_a * u[1],
        }
    }

    /// `w_n -> (u_n, u_{n-1})`.
    pub fn to_solution(&self, w: PruferState) -> Vector2<f64> {
        let prev = w.y / self.sin_a;
        Vector2::new(w.x + self.cos_a * prev, prev)
    }

    /// One site with potential `v_n`.
    pub fn step(&self, w: PruferState, v_n: f64) -> PruferState {
        let mut out = w.rotate(self.alpha);
        if v_n != 0.0 {
            out.x -= v_n * out.y / self.sin_a;
        }
        out
    }

    /// `k` free sites at once.
    pub fn free_steps(&self, w: PruferState, k: u64) -> PruferState {
        w.rotate(rotation_angle(k, self.alpha))
    }
}

/// Prüfer radius and phase recorded just after each bump.
#[derive(Debug, Clone, PartialEq)]
pub struct PruferTrajectory {
    pub energy: f64,
    pub angle: f64,
    pub initial_radius: f64,
    /// Site index of the bump each record follows.
    pub bump_sites: Vec<u64>,
    pub radii: Vec<f64>,
    pub phases: Vec<f64>,
    /// Coordinates at site `last bump + 1`.
    pub final_state: PruferState,
    frame: PruferFrame,
}

impl PruferTrajectory {
    /// Solution vector `(u_n, u_{n-1})` at `n = last bump + 1`.
    pub fn final_solution(&self) -> Vector2<f64> {
        self.frame.to_solution(self.final_state)
    }

    /// Site index that `final_solution` refers to.
    pub fn final_site(&self) -> u64 {
        self.bump_sites.last().map_or(0, |&p| p + 1)
    }
}

/// Evolves the boundary solution at energy `lambda` through every bump.
pub fn prufer_evolve(lambda: f64, pot: &SparsePotential, phi: f64) -> Result<PruferTrajectory> {
    let frame = PruferFrame::new(lambda)?;
    let mut w = frame.to_prufer(boundary_vector(phi));
    let initial_radius = w.radius();
    let n = pot.positions.len();
    let (mut radii, mut phases) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let mut site = 0u64;
    for &p in &pot.positions {
        w = frame.free_steps(w, p - site);
        w = frame.step(w, pot.v);
        site = p + 1;
        radii.push(w.radius());
        phases.push(w.phase());
    }
    Ok(PruferTrajectory {
        energy: lambda,
        angle: frame.alpha,
        initial_radius,
        bump_sites: pot.positions.clone(),
        radii,
        phases,
        final_state: w,
        frame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse_jacobi::potential::SparseModelParams;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn step_matrix_and_determinant() {
        let m = transfer_step(2.0, 0.0);
        assert_eq!(m, Matrix2::new(2.0, -1.0, 1.0, 0.0));
        for (l, v) in [(0.3, 0.9), (-1.7, 0.2), (5.0, -3.0)] {
            assert!((transfer_step(l, v).determinant() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn free_power_trace_is_chebyshev() {
        let alpha: f64 = 0.83;
        let m = transfer_step(2.0 * alpha.cos(), 0.0);
        for k in [1u64, 2, 7, 40, 1001] {
            let tr = matrix_power(&m, k).trace();
            assert!((tr - 2.0 * (k as f64 * alpha).cos()).abs() < 1e-9, "k = {k}");
        }
    }

    #[test]
    fn free_evolution_keeps_radius() {
        let pot = SparsePotential::from_omegas(2, 0.0, vec![0; 20]).unwrap();
        let traj = prufer_evolve(0.7, &pot, 0.4).unwrap();
        for r in &traj.radii {
            assert!((r - traj.initial_radius).abs() < 1e-12 * traj.initial_radius);
        }
    }

    #[test]
    fn single_bump_matches_matrix_product() {
        let pot = SparsePotential::from_omegas(2, 0.6, vec![0]).unwrap();
        let traj = prufer_evolve(0.0, &pot, 0.3).unwrap();
        let direct = transfer_product(0.0, &pot, traj.final_site()) * boundary_vector(0.3);
        let via_prufer = traj.final_solution();
        assert!((direct - via_prufer).norm() < 1e-12);
        // At alpha = pi/2 the shear gives R'^2 = (cos t - v sin t)^2 + sin^2 t
        // for incidence phase t before the bump.
        let frame = PruferFrame::new(0.0).unwrap();
        let w0 = frame.free_steps(frame.to_prufer(boundary_vector(0.3)), pot.positions[0]);
        let t = w0.rotate(FRAC_PI_2).phase();
        let growth = ((t.cos() - 0.6 * t.sin()).powi(2) + t.sin().powi(2)).sqrt();
        assert!((traj.radii[0] / traj.initial_radius - growth).abs() < 1e-12);
    }

    #[test]
    fn prufer_agrees_with_products() {
        for seed in 0..10 {
            let params = SparseModelParams::new(2, 0.8, 0.2 * seed as f64, 19, seed).unwrap();
            let pot = SparsePotential::build(&params).unwrap();
            for lambda in [-1.9, -0.6, 0.0, 0.45, 1.3] {
                let traj = prufer_evolve(lambda, &pot, params.phi).unwrap();
                let direct =
                    transfer_product(lambda, &pot, traj.final_site()) * boundary_vector(params.phi);
                let rel = (direct - traj.final_solution()).norm() / direct.norm();
                assert!(rel < 1e-9, "seed {seed} lambda {lambda}: {rel}");
            }
        }
    }

    #[test]
    fn sitewise_stepping_matches_bulk_rotation() {
        let frame = PruferFrame::new(1.1).unwrap();
        let start = frame.to_prufer(boundary_vector(0.9));
        let mut w = start;
        for _ in 0..10_000 {
            w = frame.step(w, 0.0);
        }
        assert!((w.radius() - start.radius()).abs() < 1e-12 * start.radius());
        let bulk = frame.free_steps(start, 10_000);
        assert!((bulk.x - w.x).abs() < 1e-9 && (bulk.y - w.y).abs() < 1e-9);
    }

    #[test]
    fn band_edges_rejected() {
        assert!(prufer_evolve(2.0, &SparsePotential::free(), 0.0).is_err());
        assert!(prufer_evolve(-2.5, &SparsePotential::free(), 0.0).is_err());
    }
}
