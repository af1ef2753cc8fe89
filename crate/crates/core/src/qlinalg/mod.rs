//! Dense complex linear algebra for small qubit systems.

mod eigen;
mod matrix;
mod ops;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, BlockEigen, EigenSystem};
pub use matrix::{pauli, ComplexMatrix, HERMITIAN_TOL, I, ONE, ZERO};
pub use ops::{
    inner, kron, kron_all, norm, partial_trace, partial_transpose, spectral_exp, spectral_function,
    trace_norm, Subsystem,
};
