//! Dense eigensolvers for real symmetric tridiagonal and complex Hermitian
//! matrices.
//!
//! Both routes share one kernel: implicit-shift QL iteration on a real
//! symmetric tridiagonal matrix. Hermitian input is first reduced to that form
//! by complex Householder reflections followed by a diagonal phase rotation
//! that makes the off-diagonal real.

mod dense;
mod hermitian;
mod tridiag;

pub use dense::Matrix;
pub use hermitian::{eig_hermitian, eigvals_hermitian, HermitianMatrix};
pub use tridiag::{eig_sym_tridiag, eigvals_sym_tridiag, SymTridiag};

/// Eigenvalues in ascending order; column `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T, V = T> {
    pub values: Vec<T>,
    pub vectors: Matrix<V>,
}

impl<T, V: Copy> EigenDecomposition<T, V> {
    pub fn len(&self) -> usize {
        self.vectors.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.rows() == 0
    }

    pub fn vector(&self, k: usize) -> Vec<V> {
        self.vectors.column(k)
    }
}
