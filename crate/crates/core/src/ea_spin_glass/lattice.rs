use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ensembles::CouplingDistribution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Free,
    Periodic,
}

impl BoundaryCondition {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryCondition::Free => "free",
            BoundaryCondition::Periodic => "periodic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(BoundaryCondition::Free),
            "periodic" => Ok(BoundaryCondition::Periodic),
            other => Err(Error::invalid(format!("unknown boundary condition '{other}'"))),
        }
    }
}

/// Nearest-neighbour bond from `a` to `b = a + e_direction` (wrapped
/// for periodic boundaries).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub direction: usize,
}

/// Hypercubic box `{0..L}^d`, sites numbered with the first coordinate
/// running fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub dimension: usize,
    pub side: usize,
    pub boundary: BoundaryCondition,
    bonds: Vec<Bond>,
    /// `bond_at[site * d + direction]`.
    bond_at: Vec<Option<usize>>,
}

impl Lattice {
    pub fn new(dimension: usize, side: usize, boundary: BoundaryCondition) -> Result<Self> {
        if !(dimension == 2 || dimension == 3) {
            return Err(Error::invalid(format!("dimension must be 2 or 3, got {dimension}")));
        }
        if side == 0 || (boundary == BoundaryCondition::Periodic && side < 2) {
            return Err(Error::invalid(format!(
                "side {side} too small for {} boundary",
                boundary.name()
            )));
        }
        let n = side
            .checked_pow(dimension as u32)
            .filter(|&n| n <= 1 << 30)
            .ok_or_else(|| Error::invalid("lattice too large"))?;
        let mut bonds = Vec::new();
        let mut bond_at = vec![None; n * dimension];
        let stride = |mu: usize| side.pow(mu as u32);
        for site in 0..n {
            for mu in 0..dimension {
                let x = (site / stride(mu)) % side;
                let b = if x + 1 < side {
                    site + stride(mu)
                } else if boundary == BoundaryCondition::Periodic {
                    site - x * stride(mu)
                } else {
                    continue;
                };
                bond_at[site * dimension + mu] = Some(bonds.len());
                bonds.push(Bond { a: site, b, direction: mu });
            }
        }
        Ok(Lattice {
            dimension,
            side,
            boundary,
            bonds,
            bond_at,
        })
    }

    pub fn sites(&self) -> usize {
        self.side.pow(self.dimension as u32)
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond_from(&self, site: usize, direction: usize) -> Option<usize> {
        self.bond_at[site * self.dimension + direction]
    }

    pub fn coordinate(&self, site: usize, direction: usize) -> usize {
        (site / self.side.pow(direction as u32)) % self.side
    }

    /// Bond indices of every elementary square, in the cyclic order
    /// `(x, mu), (x + e_mu, nu), (x + e_nu, mu), (x, nu)`.
    pub fn plaquettes(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for site in 0..self.sites() {
            for mu in 0..self.dimension {
                for nu in mu + 1..self.dimension {
                    let (Some(b1), Some(b4)) = (self.bond_from(site, mu), self.bond_from(site, nu)) else {
                        continue;
                    };
                    let x_mu = self.bonds[b1].b;
                    let x_nu = self.bonds[b4].b;
                    if let (Some(b2), Some(b3)) = (self.bond_from(x_mu, nu), self.bond_from(x_nu, mu)) {
                        out.push([b1, b2, b3, b4]);
                    }
                }
            }
        }
        out
    }
}

/// Anisotropy `(alpha_x, alpha_y, alpha_z)` of the pair interaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anisotropy {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Anisotropy {
    pub const ISING: Anisotropy = Anisotropy { x: 0.0, y: 0.0, z: 1.0 };
    pub const HEISENBERG: Anisotropy = Anisotropy { x: 1.0, y: 1.0, z: 1.0 };

    pub fn is_classical(&self) -> bool {
        self.x == 0.0 && self.y == 0.0 && self.z == 1.0
    }

    pub fn l1_distance(&self, other: &Anisotropy) -> f64 {
        (self.x - other.x).abs() + (self.y - other.y).abs() + (self.z - other.z).abs()
    }
}

/// Edwards–Anderson instance: a lattice with one coupling per bond.
#[derive(Debug, Clone, PartialEq)]
pub struct EAInstance {
    pub lattice: Lattice,
    pub couplings: Vec<f64>,
    pub anisotropy: Anisotropy,
}

impl EAInstance {
    pub fn new(lattice: Lattice, couplings: Vec<f64>, anisotropy: Anisotropy) -> Result<Self> {
        if couplings.len() != lattice.bonds().len() {
            return Err(Error::DimensionMismatch {
                expected: lattice.bonds().len(),
                got: couplings.len(),
            });
        }
        if couplings.iter().any(|j| !j.is_finite()) {
            return Err(Error::invalid("couplings must be finite"));
        }
        Ok(EAInstance {
            lattice,
            couplings,
            anisotropy,
        })
    }

    /// Independent couplings drawn bond by bond from `rng`.
    pub fn random<R: Rng + ?Sized>(
        lattice: Lattice,
        dist: &CouplingDistribution,
        anisotropy: Anisotropy,
        rng: &mut R,
    ) -> Self {
        let couplings = (0..lattice.bonds().len()).map(|_| dist.sample(rng)).collect();
        EAInstance {
            lattice,
            couplings,
            anisotropy,
        }
    }

    pub fn sites(&self) -> usize {
        self.lattice.sites()
    }

    pub fn coupling_l1(&self) -> f64 {
        self.couplings.iter().map(|j| j.abs()).sum()
    }

    /// `(neighbour, J)` lists; doubled bonds appear twice.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.sites()];
        for (bond, &j) in self.lattice.bonds().iter().zip(&self.couplings) {
            adj[bond.a].push((bond.b, j));
            adj[bond.b].push((bond.a, j));
        }
        adj
    }

    pub fn require_classical(&self) -> Result<()> {
        if !self.anisotropy.is_classical() {
            return Err(Error::invalid(
                "classical routines need anisotropy (0, 0, 1)",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Frustration {
    Frustrated,
    Unfrustrated,
}

/// Sign of the product of the four couplings around a square.
pub fn plaquette_frustration(couplings: [f64; 4]) -> Result<Frustration> {
    if couplings.iter().any(|&j| j == 0.0 || !j.is_finite()) {
        return Err(Error::invalid("plaquette couplings must be non-zero"));
    }
    let negatives = couplings.iter().filter(|&&j| j < 0.0).count();
    Ok(if negatives % 2 == 1 {
        Frustration::Frustrated
    } else {
        Frustration::Unfrustrated
    })
}

/// Frustration of every elementary square of the instance.
pub fn plaquette_frustrations(instance: &EAInstance) -> Result<Vec<Frustration>> {
    instance
        .lattice
        .plaquettes()
        .iter()
        .map(|p| plaquette_frustration(p.map(|b| instance.couplings[b])))
        .collect()
}

/// Negates the coupling of every bond with an endpoint at `site`.
pub fn gauge_transform(instance: &EAInstance, site: usize) -> Result<EAInstance> {
    if site >= instance.sites() {
        return Err(Error::invalid(format!("site {site} outside the lattice")));
    }
    let mut out = instance.clone();
    for (bond, j) in instance.lattice.bonds().iter().zip(out.couplings.iter_mut()) {
        if bond.a == site || bond.b == site {
            *j = -*j;
        }
    }
    Ok(out)
}
