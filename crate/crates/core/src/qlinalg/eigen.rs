//! Hermitian eigendecomposition.
//!
//! The matrix is first split into the connected components of its nonzero
//! pattern. Spin Hamiltonians that conserve magnetization fall apart into
//! small blocks this way, so a 12-site chain never needs a dense 4096x4096
//! diagonalization. Each block is handed to nalgebra's symmetric
//! (Householder tridiagonal + implicit QR) solver.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::matrix::{ComplexMatrix, HERMITIAN_TOL, ZERO};
use crate::error::{Error, Result};

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    /// Column `k` as a vector.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.dim())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }

    /// `V diag(values) V^H`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }

    /// `max |V^H V - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.values.len();
        let mut err: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let dot: Complex64 = (0..n)
                    .map(|i| self.vectors[(i, a)].conj() * self.vectors[(i, b)])
                    .sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                err = err.max((dot - expected).norm());
            }
        }
        err
    }
}

#[derive(Debug, Clone)]
struct EigenBlock {
    /// Global basis indices spanned by this block, ascending.
    indices: Vec<usize>,
    values: Vec<f64>,
    /// Row-major `b x b`; column `k` is the eigenvector for `values[k]`.
    vectors: Vec<Complex64>,
}

/// Eigendecomposition kept in block form.
#[derive(Debug, Clone)]
pub struct BlockEigen {
    dim: usize,
    blocks: Vec<EigenBlock>,
}

impl BlockEigen {
    pub fn decompose(a: &ComplexMatrix) -> Result<Self> {
        a.check_finite()?;
        let dev = a.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NonHermitianInput { deviation: dev });
        }
        let a = a.hermitian_part();
        let blocks = connected_blocks(&a)
            .into_iter()
            .map(|indices| diagonalize_block(&a, indices))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim: a.dim(),
            blocks,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All eigenvalues, ascending.
    pub fn values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(|b| b.values.iter().copied())
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min_value(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.values.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// `V f(L) V^H`, assembled block by block.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for block in &self.blocks {
            let b = block.indices.len();
            let fv: Vec<f64> = block.values.iter().map(|&x| f(x)).collect();
            for r in 0..b {
                for c in r..b {
                    let z: Complex64 = (0..b)
                        .filter(|&k| fv[k] != 0.0)
                        .map(|k| block.vectors[r * b + k] * fv[k] * block.vectors[c * b + k].conj())
                        .sum();
                    let (gr, gc) = (block.indices[r], block.indices[c]);
                    if r == c {
                        out[(gr, gr)] = Complex64::new(z.re, 0.0);
                    } else {
                        out[(gr, gc)] = z;
                        out[(gc, gr)] = z.conj();
                    }
                }
            }
        }
        out
    }

    /// Projector onto the span of all eigenvectors with `select(value)` true,
    /// scaled by `weight`.
    pub fn spectral_projector(&self, select: impl Fn(f64) -> bool, weight: f64) -> ComplexMatrix {
        self.map_spectrum(|x| if select(x) { weight } else { 0.0 })
    }

    /// Dense eigensystem with globally ascending eigenvalues.
    pub fn into_eigen_system(self) -> EigenSystem {
        let mut pairs: Vec<(f64, usize, usize)> = self
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(bi, b)| b.values.iter().enumerate().map(move |(k, &v)| (v, bi, k)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut vectors = ComplexMatrix::zeros(self.dim);
        let mut values = Vec::with_capacity(self.dim);
        for (col, &(value, bi, k)) in pairs.iter().enumerate() {
            let block = &self.blocks[bi];
            let b = block.indices.len();
            for (r, &gi) in block.indices.iter().enumerate() {
                vectors[(gi, col)] = block.vectors[r * b + k];
            }
            values.push(value);
        }
        EigenSystem { values, vectors }
    }
}

/// Connected components of the graph with an edge wherever `A_ij != 0`.
fn connected_blocks(a: &ComplexMatrix) -> Vec<Vec<usize>> {
    let n = a.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if a[(i, j)] != ZERO {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
}

fn diagonalize_block(a: &ComplexMatrix, indices: Vec<usize>) -> Result<EigenBlock> {
    let b = indices.len();
    if b == 1 {
        let i = indices[0];
        return Ok(EigenBlock {
            values: vec![a[(i, i)].re],
            vectors: vec![Complex64::new(1.0, 0.0)],
            indices,
        });
    }
    let m = DMatrix::<Complex64>::from_fn(b, b, |r, c| a[(indices[r], indices[c])]);
    let max_iter = 200 * b + 1000;
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, max_iter)
        .ok_or(Error::ConvergenceFailure { block: b })?;

    let mut order: Vec<usize> = (0..b).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::ConvergenceFailure { block: b });
    }
    let mut vectors = vec![ZERO; b * b];
    for (col, &k) in order.iter().enumerate() {
        for r in 0..b {
            vectors[r * b + col] = eig.eigenvectors[(r, k)];
        }
    }
    Ok(EigenBlock {
        indices,
        values,
        vectors,
    })
}

/// Eigendecomposition of a hermitian matrix, eigenvalues ascending.
///
/// Degenerate eigenspaces come back in whatever orthonormal basis the solver
/// produces.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<EigenSystem> {
    Ok(BlockEigen::decompose(a)?.into_eigen_system())
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(BlockEigen::decompose(a)?.values())
}
