//! Hamiltonian of a single field mode `a` coupled to an anharmonic medium
//! mode `b`:
//!
//! ```text
//! H = omega a†a + omega0 b†b + gamma b†² b² + g (a†b + b†a)      (hbar = 1)
//! ```
//!
//! `N_tot = a†a + b†b` commutes with `H`, so `H` is block diagonal over the
//! sectors `N = 0, 1, 2, ...`. Sector `N` is spanned by `|N-n; n>` (field
//! holds `N - n` quanta, medium holds `n`), `n = 0..=N`, and in that basis
//! the block is real symmetric tridiagonal.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{eig_sym_tridiag, Matrix, SymTridiag};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    /// Field frequency.
    pub omega: T,
    /// Medium oscillator frequency.
    pub omega0: T,
    /// Anharmonicity of the medium oscillator.
    pub gamma: T,
    /// Field-medium coupling.
    pub g: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(omega: T, omega0: T, gamma: T, g: T) -> Result<Self> {
        let p = Self { omega, omega0, gamma, g };
        p.validate()?;
        Ok(p)
    }

    /// `omega = omega0 = 1`, `gamma = 1`, `g = 100` (weak nonlinearity, `gamma/g = 0.01`).
    pub fn weak_nonlinearity() -> Self {
        Self { omega: T::one(), omega0: T::one(), gamma: T::one(), g: T::lit(100.0) }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("omega", self.omega), ("omega0", self.omega0), ("gamma", self.gamma), ("g", self.g)] {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::InvalidInput(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        Ok(())
    }

    pub fn with_g(self, g: T) -> Self {
        Self { g, ..self }
    }
}

/// Tridiagonal block of `H` in sector `n_total`:
/// `diag[n] = omega (N-n) + omega0 n + gamma n(n-1)`,
/// `offdiag[n] = g sqrt((N-n)(n+1))`.
pub fn block_matrix<T: Real>(p: &ModelParams<T>, n_total: usize) -> SymTridiag<T> {
    let big_n = T::from_index(n_total);
    let diag = (0..=n_total)
        .map(|n| {
            let n = T::from_index(n);
            p.omega * (big_n - n) + p.omega0 * n + p.gamma * n * (n - T::one())
        })
        .collect();
    let offdiag = (0..n_total)
        .map(|n| p.g * (T::from_index((n_total - n) * (n + 1))).sqrt())
        .collect();
    SymTridiag::new(diag, offdiag).expect("block entries are finite for validated params")
}

/// Spectrum of one conserved-number sector.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockEigensystem<T> {
    n_total: usize,
    lambdas: Vec<T>,
    /// `d[(n, s)] = <N-n; n | psi_{N s}>`
    d: Matrix<T>,
}

impl<T: Real> BlockEigensystem<T> {
    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn dim(&self) -> usize {
        self.n_total + 1
    }

    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    /// Expansion coefficient of eigenstate `s` on basis state `|N-n; n>`.
    #[inline]
    pub fn d(&self, n: usize, s: usize) -> T {
        self.d[(n, s)]
    }

    pub fn vectors(&self) -> &Matrix<T> {
        &self.d
    }
}

pub fn diagonalize_block<T: Real>(p: &ModelParams<T>, n_total: usize) -> Result<BlockEigensystem<T>> {
    let dec = eig_sym_tridiag(&block_matrix(p, n_total))?;
    Ok(BlockEigensystem { n_total, lambdas: dec.values, d: dec.vectors })
}

/// Diagonalized sectors `N = 0..=n_max`, immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTable<T> {
    params: ModelParams<T>,
    blocks: Vec<BlockEigensystem<T>>,
}

impl<T: Real> BlockTable<T> {
    pub fn build(p: &ModelParams<T>, n_max: usize) -> Result<Self> {
        p.validate()?;
        let blocks = (0..=n_max)
            .into_par_iter()
            .map(|n| diagonalize_block(p, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params: *p, blocks })
    }

    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    pub fn n_max(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn block(&self, n_total: usize) -> &BlockEigensystem<T> {
        &self.blocks[n_total]
    }

    pub fn blocks(&self) -> &[BlockEigensystem<T>] {
        &self.blocks
    }

    /// Every eigenvalue of every block, ascending.
    pub fn spectrum(&self) -> Vec<T> {
        let mut all: Vec<T> = self.blocks.iter().flat_map(|b| b.lambdas.iter().copied()).collect();
        all.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        all
    }
}

pub fn build_table<T: Real>(p: &ModelParams<T>, n_max: usize) -> Result<BlockTable<T>> {
    BlockTable::build(p, n_max)
}

/// Dense `H` on the truncated product space `{|f>_a |n>_b : f + n <= n_cut}`,
/// assembled term by term from ladder-operator action. Test oracle only.
#[derive(Debug, Clone)]
pub struct FullSpace<T> {
    n_cut: usize,
    /// `(field, atom)` occupancy of each basis index, ordered by total `N`
    /// then by atom occupancy.
    basis: Vec<(usize, usize)>,
    hamiltonian: Matrix<T>,
}

impl<T: Real> FullSpace<T> {
    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn hamiltonian(&self) -> &Matrix<T> {
        &self.hamiltonian
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    pub fn index_of(&self, field: usize, atom: usize) -> Option<usize> {
        let n_total = field + atom;
        (n_total <= self.n_cut).then(|| n_total * (n_total + 1) / 2 + atom)
    }

    /// Diagonal matrix of `a†a + b†b`.
    pub fn total_number(&self) -> Matrix<T> {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| if i == j { T::from_index(self.basis[i].0 + self.basis[i].1) } else { T::zero() })
    }
}

pub fn full_space_oracle<T: Real>(p: &ModelParams<T>, n_cut: usize) -> FullSpace<T> {
    let basis: Vec<(usize, usize)> =
        (0..=n_cut).flat_map(|nt| (0..=nt).map(move |n| (nt - n, n))).collect();
    let dim = basis.len();
    let mut fs = FullSpace { n_cut, basis, hamiltonian: Matrix::zeros(dim, dim) };
    let sq = |k: usize| T::from_index(k).sqrt();

    for col in 0..dim {
        let (f, n) = fs.basis[col];
        let add = |field: usize, atom: usize, amp: T, fs: &mut FullSpace<T>| {
            if amp == T::zero() {
                return;
            }
            let row = fs.index_of(field, atom).expect("H conserves N_tot");
            fs.hamiltonian[(row, col)] += amp;
        };
        // omega a†a
        add(f, n, p.omega * T::from_index(f), &mut fs);
        // omega0 b†b
        add(f, n, p.omega0 * T::from_index(n), &mut fs);
        // gamma b†b† b b: b b |n> = sqrt(n(n-1)) |n-2>, then b†b† restores sqrt(n(n-1))
        if n >= 2 {
            add(f, n, p.gamma * sq(n) * sq(n - 1) * sq(n - 1) * sq(n), &mut fs);
        }
        // g a† b
        if n >= 1 {
            add(f + 1, n - 1, p.g * sq(n) * sq(f + 1), &mut fs);
        }
        // g b† a
        if f >= 1 {
            add(f - 1, n + 1, p.g * sq(f) * sq(n + 1), &mut fs);
        }
    }
    fs
}

/// Rebuilds block `n_total` from the angular-momentum form
/// `H = ½(ω+ω₀−γ)N + (ω−ω₀+γ)J_z + ¼γ(N−2J_z)² + 2g J_x` with
/// `j = N/2`, `m = j − n`, and checks it agrees with [`block_matrix`]
/// entrywise to `1e-12` relative.
pub fn angular_momentum_check<T: Real>(p: &ModelParams<T>, n_total: usize) -> bool {
    let half = T::lit(0.5);
    let big_n = T::from_index(n_total);
    let j = big_n * half;
    let mut diag = Vec::with_capacity(n_total + 1);
    let mut off = Vec::with_capacity(n_total);
    for n in 0..=n_total {
        let m = j - T::from_index(n);
        let two_m = m + m;
        diag.push(
            half * (p.omega + p.omega0 - p.gamma) * big_n
                + (p.omega - p.omega0 + p.gamma) * m
                + T::lit(0.25) * p.gamma * (big_n - two_m) * (big_n - two_m),
        );
        if n < n_total {
            // <j, m-1| J_- |j, m> = sqrt((j+m)(j-m+1)); 2g J_x contributes g times it
            off.push(p.g * ((j + m) * (j - m + T::one())).sqrt());
        }
    }
    let reference = block_matrix(p, n_total);
    let close = |a: T, b: T| (a - b).abs() <= T::tol(1e-12) * T::one().max(a.abs()).max(b.abs());
    diag.iter().zip(reference.diag()).all(|(&a, &b)| close(a, b))
        && off.iter().zip(reference.offdiag()).all(|(&a, &b)| close(a, b))
}
