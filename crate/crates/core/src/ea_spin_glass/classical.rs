//! Classical (Ising) ground states: exhaustive Gray-code enumeration and
//! an exact min-plus transfer over lattice layers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::lattice::{BoundaryCondition, EAInstance};

/// Largest lattice the exhaustive solver accepts.
pub const EXHAUSTIVE_MAX_SITES: usize = 28;
/// Work limit (inner-loop steps) of the transfer solver.
pub const TRANSFER_MAX_OPS: u128 = 1 << 34;
const TRANSFER_MAX_LAYER_SITES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Exhaustive,
    Transfer,
    /// Whichever of the two is cheaper and within budget.
    Auto,
}

impl Solver {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Solver::Exhaustive),
            "transfer" => Ok(Solver::Transfer),
            "auto" => Ok(Solver::Auto),
            other => Err(Error::invalid(format!("unknown solver '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundStateResult {
    pub energy: f64,
    /// A minimizing configuration, entries `+1` or `-1`.
    pub witness: Vec<i8>,
    /// Minimizers counted individually (`sigma` and `-sigma` both count).
    pub degeneracy: u64,
    pub degeneracy_up_to_flip: u64,
}

/// `sum_bonds J_ij sigma_i sigma_j`.
pub fn classical_energy(instance: &EAInstance, sigma: &[i8]) -> Result<f64> {
    instance.require_classical()?;
    if sigma.len() != instance.sites() {
        return Err(Error::DimensionMismatch {
            expected: instance.sites(),
            got: sigma.len(),
        });
    }
    if sigma.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::invalid("spins must be +1 or -1"));
    }
    Ok(instance
        .lattice
        .bonds()
        .iter()
        .zip(&instance.couplings)
        .map(|(b, j)| j * f64::from(sigma[b.a] * sigma[b.b]))
        .sum())
}

fn tie_tolerance(instance: &EAInstance) -> f64 {
    1e-9 * instance.coupling_l1().max(1.0)
}

/// Witnesses are reported with spin 0 up.
fn finish(instance: &EAInstance, mut witness: Vec<i8>, count_up_to_flip: u64) -> Result<GroundStateResult> {
    if witness.first() == Some(&-1) {
        witness.iter_mut().for_each(|s| *s = -*s);
    }
    Ok(GroundStateResult {
        energy: classical_energy(instance, &witness)?,
        witness,
        degeneracy: 2 * count_up_to_flip,
        degeneracy_up_to_flip: count_up_to_flip,
    })
}

/// Visits all `2^(N-1)` configurations with spin 0 up, flipping one
/// spin per step in Gray-code order.
pub fn ground_state_exhaustive(instance: &EAInstance) -> Result<GroundStateResult> {
    instance.require_classical()?;
    let n = instance.sites();
    if n > EXHAUSTIVE_MAX_SITES {
        return Err(Error::Budget {
            what: "exhaustive enumeration sites (use the transfer solver)",
            requested: n,
            limit: EXHAUSTIVE_MAX_SITES,
        });
    }
    let adj = instance.adjacency();
    let tol = tie_tolerance(instance);
    let mut spins = vec![1i8; n];
    let mut energy: f64 = instance.couplings.iter().sum();
    let mut best = energy;
    let mut best_spins = spins.clone();
    let mut count = 1u64;
    for step in 1u64..(1u64 << (n - 1)) {
        let k = step.trailing_zeros() as usize + 1;
        let field: f64 = adj[k].iter().map(|&(m, j)| j * f64::from(spins[m])).sum();
        energy -= 2.0 * f64::from(spins[k]) * field;
        spins[k] = -spins[k];
        if energy < best - tol {
            best = energy;
            best_spins.copy_from_slice(&spins);
            count = 1;
        } else if energy <= best + tol {
            count += 1;
        }
    }
    finish(instance, best_spins, count)
}

/// Layer decomposition used by the transfer solver: layers are slices
/// of constant last coordinate, each holding `m = L^(d-1)` sites.
struct Layers {
    m: usize,
    count: usize,
    /// Energy of each layer state from bonds inside the layer.
    intra: Vec<Vec<f64>>,
    /// `forward[l][x]`: energy of bonds from layer `l` to `l + 1` when
    /// the two layer states differ by the bit mask `x`.
    forward: Vec<Vec<f64>>,
    /// Same for the wrap-around bonds from the last layer to layer 0.
    wrap: Option<Vec<f64>>,
}

fn layer_work(instance: &EAInstance) -> (usize, u128) {
    let lat = &instance.lattice;
    let m = lat.side.pow(lat.dimension as u32 - 1);
    let states = 1u128 << m.min(40);
    let mut ops = (lat.side as u128).saturating_mul(states * states);
    if lat.boundary == BoundaryCondition::Periodic {
        ops = ops.saturating_mul(states);
    }
    (m, ops)
}

fn pair_table(m: usize, couplings: &[f64]) -> Vec<f64> {
    (0..1usize << m)
        .map(|x| {
            couplings
                .iter()
                .enumerate()
                .map(|(k, j)| if x >> k & 1 == 1 { -j } else { *j })
                .sum()
        })
        .collect()
}

impl Layers {
    fn build(instance: &EAInstance) -> Self {
        let lat = &instance.lattice;
        let (m, _) = layer_work(instance);
        let count = lat.side;
        let last = lat.dimension - 1;
        let mut intra_bonds = vec![Vec::new(); count];
        let mut forward_j = vec![vec![0.0; m]; count.saturating_sub(1)];
        let mut wrap_j = vec![0.0; m];
        for (b, &j) in lat.bonds().iter().zip(&instance.couplings) {
            let (la, lb) = (b.a / m, b.b / m);
            if b.direction < last {
                intra_bonds[la].push((b.a % m, b.b % m, j));
            } else if lb == la + 1 {
                forward_j[la][b.a % m] += j;
            } else {
                wrap_j[b.a % m] += j;
            }
        }
        let intra = intra_bonds
            .iter()
            .map(|bonds| {
                (0..1usize << m)
                    .map(|s| {
                        bonds
                            .iter()
                            .map(|&(a, b, j)| if (s >> a ^ s >> b) & 1 == 1 { -j } else { j })
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let forward = forward_j.iter().map(|js| pair_table(m, js)).collect();
        let wrap = (lat.boundary == BoundaryCondition::Periodic).then(|| pair_table(m, &wrap_j));
        Layers {
            m,
            count,
            intra,
            forward,
            wrap,
        }
    }

    /// Min-plus sweep from layer 0 (fixed to `start` if given). Returns the
    /// final `(cost, count)` per state and the back pointers.
    fn sweep(&self, start: Option<usize>, tol: f64) -> (Vec<(f64, u64)>, Vec<Vec<u32>>) {
        let states = 1usize << self.m;
        let mut cost: Vec<(f64, u64)> = (0..states)
            .map(|s| match start {
                Some(s0) if s0 != s => (f64::INFINITY, 0),
                _ => (self.intra[0][s], 1),
            })
            .collect();
        let mut back = Vec::with_capacity(self.count.saturating_sub(1));
        for l in 1..self.count {
            let table = &self.forward[l - 1];
            let mut next = vec![(f64::INFINITY, 0u64); states];
            let mut ptr = vec![0u32; states];
            for (t, slot) in next.iter_mut().enumerate() {
                let mut best = f64::INFINITY;
                let mut ways = 0u64;
                let mut arg = 0;
                for (s, &(c, w)) in cost.iter().enumerate() {
                    if w == 0 {
                        continue;
                    }
                    let e = c + table[s ^ t];
                    if e < best - tol {
                        best = e;
                        ways = w;
                        arg = s;
                    } else if e <= best + tol {
                        ways += w;
                    }
                }
                *slot = (best + self.intra[l][t], ways);
                ptr[t] = arg as u32;
            }
            cost = next;
            back.push(ptr);
        }
        (cost, back)
    }

    fn trace(&self, last: usize, back: &[Vec<u32>]) -> Vec<usize> {
        let mut states = vec![last];
        for ptr in back.iter().rev() {
            let prev = ptr[*states.last().unwrap()] as usize;
            states.push(prev);
        }
        states.reverse();
        states
    }
}

/// Exact ground state by dynamic programming over layers of constant
/// last coordinate. Cost grows like `L 4^m` (free) or `L 8^m`
/// (periodic) with `m = L^(d-1)`.
pub fn ground_state_transfer(instance: &EAInstance) -> Result<GroundStateResult> {
    instance.require_classical()?;
    let (m, ops) = layer_work(instance);
    if m > TRANSFER_MAX_LAYER_SITES || ops > TRANSFER_MAX_OPS {
        return Err(Error::Budget {
            what: "transfer solver work",
            requested: usize::try_from(ops).unwrap_or(usize::MAX),
            limit: TRANSFER_MAX_OPS as usize,
        });
    }
    let layers = Layers::build(instance);
    let tol = tie_tolerance(instance);
    let states = 1usize << m;

    let mut best = f64::INFINITY;
    let mut ways = 0u64;
    let mut arg = (None, 0usize);
    let starts: Vec<Option<usize>> = match &layers.wrap {
        Some(_) => (0..states).map(Some).collect(),
        None => vec![None],
    };
    for start in starts {
        let (cost, _) = layers.sweep(start, tol);
        for (t, &(c, w)) in cost.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let e = match (&layers.wrap, start) {
                (Some(wrap), Some(s0)) => c + wrap[t ^ s0],
                _ => c,
            };
            if e < best - tol {
                best = e;
                ways = w;
                arg = (start, t);
            } else if e <= best + tol {
                ways += w;
            }
        }
    }
    let (start, last) = arg;
    let (_, back) = layers.sweep(start, tol);
    let path = layers.trace(last, &back);
    let mut witness = vec![1i8; instance.sites()];
    for (l, &s) in path.iter().enumerate() {
        for k in 0..m {
            if s >> k & 1 == 1 {
                witness[l * m + k] = -1;
            }
        }
    }
    finish(instance, witness, ways / 2)
}

/// Dispatches to the requested solver.
pub fn ground_state(instance: &EAInstance, solver: Solver) -> Result<GroundStateResult> {
    match solver {
        Solver::Exhaustive => ground_state_exhaustive(instance),
        Solver::Transfer => ground_state_transfer(instance),
        Solver::Auto => {
            let n = instance.sites();
            let exhaustive_ops = (1u128 << (n.min(100) - 1)) * 2 * instance.lattice.dimension as u128;
            let (m, transfer_ops) = layer_work(instance);
            let transfer_ok = m <= TRANSFER_MAX_LAYER_SITES && transfer_ops <= TRANSFER_MAX_OPS;
            if !transfer_ok && n > EXHAUSTIVE_MAX_SITES {
                return Err(Error::Budget {
                    what: "sites for exhaustive enumeration, with transfer work also over its limit",
                    requested: n,
                    limit: EXHAUSTIVE_MAX_SITES,
                });
            }
            if transfer_ok && (transfer_ops < exhaustive_ops || n > EXHAUSTIVE_MAX_SITES) {
                ground_state_transfer(instance)
            } else {
                ground_state_exhaustive(instance)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ea_spin_glass::lattice::{gauge_transform, Anisotropy, Lattice};
    use crate::ensembles::CouplingDistribution;
    use crate::stream::Streams;
    use proptest::prelude::*;

    fn instance(d: usize, l: usize, bc: BoundaryCondition, j: Vec<f64>) -> EAInstance {
        EAInstance::new(Lattice::new(d, l, bc).unwrap(), j, Anisotropy::ISING).unwrap()
    }

    fn random(d: usize, l: usize, bc: BoundaryCondition, dist: CouplingDistribution, seed: u64) -> EAInstance {
        let lat = Lattice::new(d, l, bc).unwrap();
        EAInstance::random(lat, &dist, Anisotropy::ISING, &mut Streams::new(seed).stream("test", 0))
    }

    /// Brute force over all `2^N` configurations, no symmetry, no
    /// incremental updates.
    fn brute(inst: &EAInstance) -> (f64, u64) {
        let n = inst.sites();
        let mut best = f64::INFINITY;
        let mut energies = Vec::new();
        for mask in 0u32..(1 << n) {
            let s: Vec<i8> = (0..n).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
            let e = classical_energy(inst, &s).unwrap();
            best = best.min(e);
            energies.push(e);
        }
        let count = energies.iter().filter(|&&e| (e - best).abs() < 1e-9).count() as u64;
        (best, count)
    }

    /// Plaquette as the free 2x2 lattice; bond order is (0,1), (0,2), (1,3), (2,3).
    fn plaquette(j: [f64; 4]) -> EAInstance {
        instance(2, 2, BoundaryCondition::Free, j.to_vec())
    }

    #[test]
    fn two_by_two_examples() {
        let inst = plaquette([1.0; 4]);
        assert_eq!(classical_energy(&inst, &[1, -1, -1, 1]).unwrap(), -4.0);
        assert_eq!(classical_energy(&inst, &[1, 1, 1, 1]).unwrap(), 4.0);
        assert!(classical_energy(&inst, &[1, 1, 1]).is_err());
        assert!(classical_energy(&inst, &[1, 0, 1, 1]).is_err());
    }

    #[test]
    fn plaquette_ground_states() {
        let u = ground_state_exhaustive(&plaquette([1.0, -1.0, -1.0, 1.0])).unwrap();
        assert_eq!(u.energy, -4.0);
        assert!(u.degeneracy >= 2);
        let f = ground_state_exhaustive(&plaquette([1.0, 1.0, 1.0, -1.0])).unwrap();
        assert_eq!(f.energy, -2.0);
        assert_eq!(f.degeneracy, 8);
        assert_eq!(f.degeneracy_up_to_flip, 4);
        assert_eq!(classical_energy(&plaquette([1.0, 1.0, 1.0, -1.0]), &f.witness).unwrap(), -2.0);
    }

    #[test]
    fn ferromagnetic_cube() {
        let cube = instance(3, 2, BoundaryCondition::Free, vec![1.0; 12]);
        let r = ground_state_exhaustive(&cube).unwrap();
        assert_eq!(r.energy, -12.0);
        assert_eq!(r.degeneracy, 2);
        assert_eq!(ground_state_transfer(&cube).unwrap(), r);
    }

    #[test]
    fn budget_is_enforced() {
        let inst = random(2, 6, BoundaryCondition::Free, CouplingDistribution::Bernoulli, 1);
        let err = ground_state_exhaustive(&inst).unwrap_err();
        assert!(err.is_budget());
        assert!(err.to_string().contains("transfer"));
        let big = random(3, 4, BoundaryCondition::Periodic, CouplingDistribution::Bernoulli, 1);
        assert!(ground_state(&big, Solver::Auto).unwrap_err().is_budget());
        let quantum = EAInstance { anisotropy: Anisotropy::HEISENBERG, ..inst };
        assert!(ground_state_exhaustive(&quantum).is_err());
    }

    #[test]
    fn solvers_agree_with_brute_force() {
        let cases = [
            (2, 3, BoundaryCondition::Free),
            (2, 3, BoundaryCondition::Periodic),
            (2, 2, BoundaryCondition::Periodic),
            (3, 2, BoundaryCondition::Free),
            (3, 2, BoundaryCondition::Periodic),
        ];
        for (k, &(d, l, bc)) in cases.iter().enumerate() {
            for (dist, seed) in [(CouplingDistribution::Bernoulli, 10), (CouplingDistribution::gaussian(), 20)] {
                let inst = random(d, l, bc, dist, seed + k as u64);
                let (e, count) = brute(&inst);
                let ex = ground_state_exhaustive(&inst).unwrap();
                let tr = ground_state_transfer(&inst).unwrap();
                assert!((ex.energy - e).abs() < 1e-12, "{d} {l} {bc:?}");
                assert!((tr.energy - e).abs() < 1e-12, "{d} {l} {bc:?}");
                assert_eq!(ex.degeneracy, count);
                assert_eq!(tr.degeneracy, count);
            }
        }
    }

    #[test]
    fn transfer_handles_larger_lattices() {
        let inst = random(2, 5, BoundaryCondition::Periodic, CouplingDistribution::Bernoulli, 3);
        let tr = ground_state_transfer(&inst).unwrap();
        let ex = ground_state_exhaustive(&inst).unwrap();
        assert_eq!(tr.energy, ex.energy);
        assert_eq!(tr.degeneracy, ex.degeneracy);
        let wide = random(2, 10, BoundaryCondition::Free, CouplingDistribution::Bernoulli, 4);
        let r = ground_state(&wide, Solver::Auto).unwrap();
        assert_eq!(classical_energy(&wide, &r.witness).unwrap(), r.energy);
        assert!(r.energy >= -(wide.coupling_l1()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn gauge_and_flip_invariance(seed in 0u64..1000, site in 0usize..9, periodic in any::<bool>()) {
            let bc = if periodic { BoundaryCondition::Periodic } else { BoundaryCondition::Free };
            let inst = random(2, 3, bc, CouplingDistribution::Uniform, seed);
            let e0 = ground_state_exhaustive(&inst).unwrap().energy;
            let g = gauge_transform(&inst, site).unwrap();
            let e1 = ground_state_exhaustive(&g).unwrap().energy;
            prop_assert!((e0 - e1).abs() < 1e-12);
            let sigma: Vec<i8> = (0..9).map(|k| if (seed >> k) & 1 == 1 { 1 } else { -1 }).collect();
            let flipped: Vec<i8> = sigma.iter().map(|s| -s).collect();
            prop_assert_eq!(classical_energy(&inst, &sigma).unwrap(), classical_energy(&inst, &flipped).unwrap());
        }
    }
}
