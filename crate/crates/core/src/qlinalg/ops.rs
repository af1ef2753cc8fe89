use num_complex::Complex64;

use super::eigen::BlockEigen;
use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Which factor of a two-qubit space an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Kronecker product `A (x) B`; `A` is the more significant factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

/// Kronecker product of a list of factors, leftmost most significant.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Partial transpose of a two-qubit operator.
///
/// For the second subsystem, `out[(m,mu),(n,nu)] = rho[(m,nu),(n,mu)]`.
pub fn partial_transpose(rho: &ComplexMatrix, subsystem: Subsystem) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    Ok(ComplexMatrix::from_fn(4, |row, col| {
        let (m, mu) = (row / 2, row % 2);
        let (n, nu) = (col / 2, col % 2);
        match subsystem {
            Subsystem::Second => rho[(2 * m + nu, 2 * n + mu)],
            Subsystem::First => rho[(2 * n + mu, 2 * m + nu)],
        }
    }))
}

/// Reduced state of sites `keep = (i, j)` of an `n_sites`-qubit operator.
///
/// The output is ordered `|q_i q_j>`, so site `i` becomes the first factor.
pub fn partial_trace(
    rho: &ComplexMatrix,
    keep: (usize, usize),
    n_sites: usize,
) -> Result<ComplexMatrix> {
    if n_sites < 2 || n_sites >= usize::BITS as usize || rho.dim() != 1usize << n_sites {
        return Err(Error::DimensionMismatch {
            expected: if n_sites < usize::BITS as usize {
                1usize << n_sites
            } else {
                usize::MAX
            },
            actual: rho.dim(),
        });
    }
    let (si, sj) = keep;
    if si == sj || si >= n_sites || sj >= n_sites {
        return Err(Error::IndexOutOfRange {
            first: si,
            second: sj,
            n_sites,
        });
    }
    let bit_i = n_sites - 1 - si;
    let bit_j = n_sites - 1 - sj;
    let (lo, hi) = (bit_i.min(bit_j), bit_i.max(bit_j));

    // spread the n-2 "rest" bits around the two kept positions
    let embed = |rest: usize, a: usize| -> usize {
        let low = rest & ((1 << lo) - 1);
        let mid = (rest >> lo) & ((1 << (hi - lo - 1)) - 1);
        let top = rest >> (hi - 1);
        let mut x = low | (mid << (lo + 1)) | (top << (hi + 1));
        if a & 0b10 != 0 {
            x |= 1 << bit_i;
        }
        if a & 0b01 != 0 {
            x |= 1 << bit_j;
        }
        x
    };

    let mut out = [[ZERO; 4]; 4];
    for rest in 0..(1usize << (n_sites - 2)) {
        let idx: [usize; 4] = std::array::from_fn(|a| embed(rest, a));
        for a in 0..4 {
            for b in 0..4 {
                out[a][b] += rho[(idx[a], idx[b])];
            }
        }
    }
    Ok(ComplexMatrix::from_fn(4, |a, b| out[a][b]))
}

/// Sum of absolute eigenvalues of a hermitian matrix.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(BlockEigen::decompose(a)?
        .values()
        .iter()
        .map(|x| x.abs())
        .sum())
}

/// `exp(scale * A)` for hermitian `A`, computed as `V exp(scale L) V^H`.
pub fn spectral_exp(a: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    spectral_function(a, |x| (scale * x).exp())
}

/// `f(A) = V f(L) V^H` for hermitian `A`.
pub fn spectral_function(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    Ok(BlockEigen::decompose(a)?.map_spectrum(f))
}

/// Inner product `<u|v>`.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
