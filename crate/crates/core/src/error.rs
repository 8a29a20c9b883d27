use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("tridiagonal eigensolver did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("matrix is not Hermitian: |a[{row}][{col}] - conj(a[{col}][{row}])| = {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("truncation tolerance {0:e} outside (0, 1e-6]")]
    TruncationTolerance(f64),

    #[error("block table covers N <= {available}, state needs N <= {required}")]
    TableTooSmall { required: usize, available: usize },

    #[error("density eigenvalue {0:e} below the clamp threshold")]
    NegativeEigenvalue(f64),

    #[error("reduced density trace deviates from 1 by {0:e}")]
    TraceDeviation(f64),

    #[error("field and medium entropies differ by {0:e}")]
    EntropyMismatch(f64),

    #[error("imaginary residue {0:e} in a Hermitian expectation value")]
    ImaginaryResidue(f64),

    #[error("gamma = 0: the dynamics is periodic and has no revival time")]
    NoRevival,

    #[error("window [{lo}, {hi}] is not covered by the series")]
    WindowOutOfRange { lo: f64, hi: f64 },
}
