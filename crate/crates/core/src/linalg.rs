//! Dense symmetric eigendecomposition (backed by `faer`) and a Sturm
//! sequence counter for symmetric tridiagonal matrices.

use faer::{Mat, Side};

use crate::error::{Error, Result};

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigendecomposition {
    pub values: Vec<f64>,
    /// Column-major: eigenvector `k` is `vectors[k*dim .. (k+1)*dim]`.
    vectors: Vec<f64>,
    dim: usize,
}

impl Eigendecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.vectors.chunks_exact(self.dim)
    }

    /// `max |V^T V - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                let dot: f64 = self.vector(i).iter().zip(self.vector(j)).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Full eigendecomposition of the symmetric matrix given by `entry(i, j)`
/// for `i >= j`.
pub fn symmetric_eigen(dim: usize, entry: impl Fn(usize, usize) -> f64) -> Result<Eigendecomposition> {
    if dim == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    let mat = Mat::<f64>::from_fn(dim, dim, |i, j| if i >= j { entry(i, j) } else { entry(j, i) });
    let evd = mat
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::invalid(format!("eigensolver failed to converge: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
    let values = order.iter().map(|&k| s[k]).collect();
    let mut vectors = Vec::with_capacity(dim * dim);
    for &k in &order {
        vectors.extend((0..dim).map(|i| u[(i, k)]));
    }
    Ok(Eigendecomposition {
        values,
        vectors,
        dim,
    })
}

/// Symmetric tridiagonal matrix with `diagonal` and `off_diagonal`
/// (`off_diagonal.len() == diagonal.len() - 1`).
pub fn tridiagonal_eigen(diagonal: &[f64], off_diagonal: &[f64]) -> Result<Eigendecomposition> {
    let n = diagonal.len();
    if off_diagonal.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n.saturating_sub(1),
            got: off_diagonal.len(),
        });
    }
    symmetric_eigen(n, |i, j| {
        if i == j {
            diagonal[i]
        } else if i == j + 1 {
            off_diagonal[j]
        } else {
            0.0
        }
    })
}

/// Number of eigenvalues strictly below `x` (LDL^T pivot signs).
pub fn sturm_count(diagonal: &[f64], off_diagonal: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diagonal.iter().enumerate() {
        q = if i == 0 {
            d - x
        } else {
            let prev = if q == 0.0 { f64::MIN_POSITIVE } else { q };
            d - x - off_diagonal[i - 1] * off_diagonal[i - 1] / prev
        };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix by bisection on
/// the Sturm count.
pub fn lowest_tridiagonal_eigenvalue(diagonal: &[f64], off_diagonal: &[f64]) -> f64 {
    let n = diagonal.len();
    let radius = |i: usize| {
        let left = if i > 0 { off_diagonal[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off_diagonal[i].abs() } else { 0.0 };
        left + right
    };
    let mut lo = (0..n).map(|i| diagonal[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let mut hi = (0..n).map(|i| diagonal[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diagonal, off_diagonal, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosResult {
    pub value: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lowest eigenvalue of the symmetric operator `matvec` by Lanczos with
/// full reorthogonalization. `scale` bounds the operator norm and sets
/// the stopping tolerance; `start` must be non-zero.
pub fn lanczos_lowest(
    dim: usize,
    matvec: impl Fn(&[f64], &mut [f64]),
    start: &[f64],
    max_iter: usize,
    scale: f64,
) -> Result<LanczosResult> {
    if start.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: start.len(),
        });
    }
    let norm = dot(start, start).sqrt();
    if !(norm > 0.0) {
        return Err(Error::invalid("Lanczos start vector must be non-zero"));
    }
    let tol = 1e-14 * scale.max(1.0);
    let max_iter = max_iter.min(dim).max(1);
    let mut basis: Vec<Vec<f64>> = vec![start.iter().map(|x| x / norm).collect()];
    let (mut alphas, mut betas) = (Vec::new(), Vec::new());
    let mut w = vec![0.0; dim];
    let mut history: Vec<f64> = Vec::new();
    loop {
        let j = basis.len() - 1;
        matvec(&basis[j], &mut w);
        let a = dot(&basis[j], &w);
        alphas.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
            }
        }
        let theta = lowest_tridiagonal_eigenvalue(&alphas, &betas);
        history.push(theta);
        let b = dot(&w, &w).sqrt();
        let stalled = history.len() > 10 && (history[history.len() - 11] - theta).abs() <= tol;
        if b <= tol || stalled || alphas.len() >= max_iter {
            return Ok(LanczosResult {
                value: theta,
                iterations: alphas.len(),
            });
        }
        betas.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
}
