//! Oracle battery on small truncated spaces (`N_cut <= 6`): every fast path
//! is compared against an independent dense or brute-force computation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entanglement::{entropies, reduce, reduced_matrix, Subsystem};
use crate::error::Result;
use crate::evolution::{density_matrix_elements, evolve, project_grid, to_fock_grid, FockGrid};
use crate::linalg::{eig_sym_tridiag, eigvals_hermitian, HermitianMatrix, Matrix, SymTridiag};
use crate::model::{angular_momentum_check, full_space_oracle, BlockTable, FullSpace, ModelParams};
use crate::observables::{annihilate, eigenbasis_ladder_element, Mode};
use crate::oracle::{bisection_eigenvalues, embedded_hermitian_eigenvalues, jacobi_eigen};
use crate::scalar::Complex;

pub const SELFTEST_N_CUT: usize = 6;
pub const SELFTEST_TIMES: [f64; 3] = [0.1, 1.0, 10.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

/// Dense diagonalization of the full-space Hamiltonian by cyclic Jacobi.
pub struct DenseOracle {
    pub space: FullSpace<f64>,
    pub values: Vec<f64>,
    pub vectors: Matrix<f64>,
}

impl DenseOracle {
    pub fn new(p: &ModelParams<f64>, n_cut: usize) -> Self {
        let space = full_space_oracle(p, n_cut);
        let (values, vectors) = jacobi_eigen(space.hamiltonian());
        Self { space, values, vectors }
    }

    /// `V exp(-iΛt) Vᵀ ψ0`.
    pub fn propagate(&self, psi0: &[Complex<f64>], t: f64) -> Vec<Complex<f64>> {
        let n = self.values.len();
        let v = &self.vectors;
        let coeff: Vec<Complex<f64>> = (0..n)
            .map(|k| {
                let c = (0..n).fold(Complex::new(0.0, 0.0), |a, i| a + psi0[i] * v[(i, k)]);
                c * Complex::from_polar(1.0, -self.values[k] * t)
            })
            .collect();
        (0..n).map(|i| (0..n).fold(Complex::new(0.0, 0.0), |a, k| a + coeff[k] * v[(i, k)])).collect()
    }

    /// Partial trace of `|ψ><ψ|` over the other mode, on levels `0..=n_cut`.
    pub fn partial_trace(&self, psi: &[Complex<f64>], keep: Subsystem) -> Matrix<Complex<f64>> {
        let dim = self.space.n_cut() + 1;
        let mut rho = Matrix::from_elem(dim, dim, Complex::new(0.0, 0.0));
        for (i, &(fi, ni)) in self.space.basis().iter().enumerate() {
            for (j, &(fj, nj)) in self.space.basis().iter().enumerate() {
                let (ki, kj, traced_equal) = match keep {
                    Subsystem::Field => (fi, fj, ni == nj),
                    Subsystem::Atom => (ni, nj, fi == fj),
                };
                if traced_equal {
                    rho[(ki, kj)] = rho[(ki, kj)] + psi[i] * psi[j].conj();
                }
            }
        }
        rho
    }
}

/// Random normalized state on `N_tot <= n_cut`, flattened in full-space order.
pub fn random_state(n_cut: usize, seed: u64) -> Vec<Complex<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = (n_cut + 1) * (n_cut + 2) / 2;
    let v: Vec<Complex<f64>> = (0..dim).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn grid_from_flat(n_cut: usize, flat: &[Complex<f64>]) -> FockGrid<f64> {
    let mut k = 0;
    FockGrid {
        blocks: (0..=n_cut)
            .map(|nt| {
                let b = flat[k..k + nt + 1].to_vec();
                k += nt + 1;
                b
            })
            .collect(),
    }
}

fn flat_from_grid(grid: &FockGrid<f64>) -> Vec<Complex<f64>> {
    grid.blocks.iter().flatten().copied().collect()
}

fn max_dev(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest amplitude difference between block-spectral and dense propagation
/// of a seeded random state, over `times`.
pub fn propagation_deviation(p: &ModelParams<f64>, n_cut: usize, seed: u64, times: &[f64]) -> Result<f64> {
    let dense = DenseOracle::new(p, n_cut);
    let table = BlockTable::build(p, n_cut)?;
    let psi0 = random_state(n_cut, seed);
    let c0 = project_grid(&grid_from_flat(n_cut, &psi0), &table)?;
    let mut worst: f64 = 0.0;
    for &t in times {
        let fast = flat_from_grid(&to_fock_grid(&evolve(&c0, &table, t), &table));
        worst = worst.max(max_dev(&fast, &dense.propagate(&psi0, t)));
    }
    Ok(worst)
}

/// Largest gap between the sorted union of block spectra and the sorted
/// dense spectrum on `N_tot <= n_cut`.
pub fn spectrum_deviation(p: &ModelParams<f64>, n_cut: usize) -> Result<f64> {
    let mut blocks = BlockTable::build(p, n_cut)?.spectrum();
    blocks.sort_by(f64::total_cmp);
    let dense = DenseOracle::new(p, n_cut).values;
    Ok(blocks.iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// `max |N_tot H - H N_tot|` on the dense oracle space.
pub fn commutator_norm(p: &ModelParams<f64>, n_cut: usize) -> f64 {
    let space = full_space_oracle(p, n_cut);
    let n = space.total_number();
    let h = space.hamiltonian();
    let nh = n.matmul(h);
    let hn = h.matmul(&n);
    nh.as_slice().iter().zip(hn.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Largest element gap between the grid partial trace and the dense one.
pub fn partial_trace_deviation(p: &ModelParams<f64>, n_cut: usize, seed: u64, t: f64) -> Result<f64> {
    let dense = DenseOracle::new(p, n_cut);
    let table = BlockTable::build(p, n_cut)?;
    let psi0 = random_state(n_cut, seed);
    let c0 = project_grid(&grid_from_flat(n_cut, &psi0), &table)?;
    let grid = to_fock_grid(&evolve(&c0, &table, t), &table);
    let psi_t = dense.propagate(&psi0, t);
    let mut worst: f64 = 0.0;
    for keep in [Subsystem::Field, Subsystem::Atom] {
        let a = reduced_matrix(&grid, keep);
        let b = dense.partial_trace(&psi_t, keep);
        worst = worst.max(max_dev(a.as_slice(), b.as_slice()));
    }
    Ok(worst)
}

fn random_tridiag(rng: &mut ChaCha8Rng, n: usize) -> SymTridiag<f64> {
    let d = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
    let e = (0..n - 1).map(|_| rng.gen_range(-5.0..5.0)).collect();
    SymTridiag::new(d, e).expect("finite random entries")
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix<f64> {
    let mut m = Matrix::from_elem(n, n, Complex::new(0.0, 0.0));
    for i in 0..n {
        m[(i, i)] = Complex::new(rng.gen_range(-2.0..2.0), 0.0);
        for j in i + 1..n {
            let z = Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::new(m).expect("Hermitian by construction")
}

/// Runs the whole battery with the weak-nonlinearity parameters.
pub fn run_selftest() -> Result<Vec<Check>> {
    let p = ModelParams::<f64>::weak_nonlinearity();
    let n_cut = SELFTEST_N_CUT;
    let mut checks = Vec::new();

    checks.push(Check { name: "block spectra vs dense H", deviation: spectrum_deviation(&p, n_cut)?, tolerance: 1e-8 });
    checks.push(Check { name: "[N_tot, H] vanishes", deviation: commutator_norm(&p, n_cut), tolerance: 0.0 });
    let am_failures = (0..=n_cut).filter(|&n| !angular_momentum_check(&p, n)).count();
    checks.push(Check { name: "angular-momentum block form", deviation: am_failures as f64, tolerance: 0.0 });

    let mut prop: f64 = 0.0;
    let mut trace: f64 = 0.0;
    for seed in 0..4 {
        prop = prop.max(propagation_deviation(&p, n_cut, seed, &SELFTEST_TIMES)?);
        trace = trace.max(partial_trace_deviation(&p, n_cut, seed, 1.0)?);
    }
    checks.push(Check { name: "spectral vs dense propagation", deviation: prop, tolerance: 1e-10 });
    checks.push(Check { name: "partial trace vs dense", deviation: trace, tolerance: 1e-10 });

    let table = BlockTable::build(&p, n_cut)?;
    let c0 = project_grid(&grid_from_flat(n_cut, &random_state(n_cut, 7)), &table)?;
    let st = evolve(&c0, &table, 2.5);
    let rho = density_matrix_elements(&st);
    checks.push(Check { name: "pure-state idempotency", deviation: rho.idempotency_defect(), tolerance: 1e-8 });
    let grid = to_fock_grid(&st, &table);
    let sf = entropies(&reduce(&grid, Subsystem::Field)?)?;
    let sa = entropies(&reduce(&grid, Subsystem::Atom)?)?;
    let sym = (sf.svne - sa.svne).abs().max((sf.sle - sa.sle).abs());
    checks.push(Check { name: "field/atom entropy symmetry", deviation: sym, tolerance: 1e-8 });

    let mut ladder: f64 = 0.0;
    let eigen_grid = |nt: usize, s: usize| {
        FockGrid::from_fn(n_cut, |f, n| if f + n == nt { Complex::new(table.block(nt).d(n, s), 0.0) } else { Complex::new(0.0, 0.0) })
    };
    for mode in [Mode::Field, Mode::Atom] {
        for nt in 0..n_cut {
            for s in 0..=nt {
                for sp in 0..=nt + 1 {
                    let brute = eigen_grid(nt, s).inner(&annihilate(&eigen_grid(nt + 1, sp), mode));
                    let formula = eigenbasis_ladder_element(&table, mode, (nt, s), (nt + 1, sp));
                    ladder = ladder.max((brute.re - formula).abs());
                }
            }
        }
    }
    checks.push(Check { name: "eigenbasis ladder elements", deviation: ladder, tolerance: 1e-12 });

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut tri: f64 = 0.0;
    let mut herm: f64 = 0.0;
    for _ in 0..20 {
        let m = random_tridiag(&mut rng, 8);
        let fast = eig_sym_tridiag(&m)?.values;
        let slow = bisection_eigenvalues(&m);
        let scale = m.norm_inf().max(1.0);
        tri = tri.max(fast.iter().zip(&slow).map(|(a, b)| (a - b).abs() / scale).fold(0.0, f64::max));
        let h = random_hermitian(&mut rng, 6);
        let fast = eigvals_hermitian(&h)?;
        let slow = embedded_hermitian_eigenvalues(&h);
        herm = herm.max(fast.iter().zip(&slow).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    checks.push(Check { name: "tridiagonal QL vs bisection", deviation: tri, tolerance: 1e-10 });
    checks.push(Check { name: "Hermitian solver vs real embedding", deviation: herm, tolerance: 1e-10 });
    Ok(checks)
}
