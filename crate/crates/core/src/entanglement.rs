//! Partial traces of the evolved pure state and the sub-system entropies
//! `S = -Tr ρ ln ρ` (nats) and `δ = 1 - Tr ρ²`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::{evolve, phase_factor, to_fock_grid, FactorialWeights, FockGrid};
use crate::linalg::{eigvals_hermitian, HermitianMatrix, Matrix};
use crate::model::BlockTable;
use crate::scalar::{czero, Complex, Real};
use crate::states::{EigenbasisCoefficients, InitialState};

/// Eigenvalues in `[-NEGATIVE_CLAMP, 0)` are round-off and are set to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;
/// Largest tolerated `|Tr ρ - 1|` before the entropies are refused.
pub const TRACE_TOLERANCE: f64 = 1e-6;
/// Per-sample tolerance on entropy identities such as `S_field = S_atom`.
pub const ENTROPY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Field,
    Atom,
}

#[derive(Debug, Clone)]
pub struct ReducedDensity<T> {
    pub subsystem: Subsystem,
    pub rho: HermitianMatrix<T>,
    /// Ascending eigenvalues of `rho`.
    pub spectrum: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPair<T> {
    pub svne: T,
    pub sle: T,
}

/// Reduced density matrix on Fock levels `0..=N_max` of one mode.
pub fn reduced_matrix<T: Real>(grid: &FockGrid<T>, which: Subsystem) -> Matrix<Complex<T>> {
    let n_max = grid.n_max();
    let dim = n_max + 1;
    let mut rho = Matrix::from_elem(dim, dim, czero());
    for i in 0..dim {
        for j in i..dim {
            // sum over the traced-out occupancy k while both totals stay on the grid
            let mut acc = czero();
            for k in 0..=(n_max - j) {
                let (x, y) = match which {
                    Subsystem::Field => (grid.get(i, k), grid.get(j, k)),
                    Subsystem::Atom => (grid.get(k, i), grid.get(k, j)),
                };
                acc = acc + x * y.conj();
            }
            rho[(i, j)] = acc;
            rho[(j, i)] = acc.conj();
        }
    }
    rho
}

pub fn reduce<T: Real>(grid: &FockGrid<T>, which: Subsystem) -> Result<ReducedDensity<T>> {
    let rho = HermitianMatrix::new(reduced_matrix(grid, which))?;
    let spectrum = eigvals_hermitian(&rho)?;
    Ok(ReducedDensity { subsystem: which, rho, spectrum })
}

pub fn entropies<T: Real>(r: &ReducedDensity<T>) -> Result<EntropyPair<T>> {
    entropies_from_spectrum(&r.spectrum)
}

/// Entropies from the eigenvalues of a density matrix. The spectrum is
/// divided by its trace (the truncated state misses at most the discarded
/// tail), then clamped into `[0, 1]`, with `0 ln 0 = 0`.
pub fn entropies_from_spectrum<T: Real>(spectrum: &[T]) -> Result<EntropyPair<T>> {
    let trace: T = spectrum.iter().copied().sum();
    if (trace - T::one()).abs() > T::lit(TRACE_TOLERANCE) {
        return Err(Error::TraceDeviation((trace - T::one()).as_f64()));
    }
    let floor = -T::tol(NEGATIVE_CLAMP);
    let mut svne = T::zero();
    let mut purity = T::zero();
    for &raw in spectrum {
        if raw < floor {
            return Err(Error::NegativeEigenvalue(raw.as_f64()));
        }
        let lam = (raw / trace).max(T::zero()).min(T::one());
        if lam > T::zero() {
            svne -= lam * lam.ln();
        }
        purity += lam * lam;
    }
    Ok(EntropyPair { svne: svne.max(T::zero()), sle: (T::one() - purity).max(T::zero()) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySample<T> {
    pub t: T,
    pub field: EntropyPair<T>,
    pub atom: EntropyPair<T>,
}

pub fn entropy_sample<T: Real>(grid: &FockGrid<T>, t: T) -> Result<EntropySample<T>> {
    let field = entropies(&reduce(grid, Subsystem::Field)?)?;
    let atom = entropies(&reduce(grid, Subsystem::Atom)?)?;
    Ok(EntropySample { t, field, atom })
}

/// Entropies of both modes at every requested time, evaluated in parallel.
pub fn entropy_timeseries<T: Real>(
    c0: &EigenbasisCoefficients<T>,
    table: &BlockTable<T>,
    times: &[T],
) -> Result<Vec<EntropySample<T>>> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidInput("sample times must be finite".into()));
    }
    times
        .par_iter()
        .map(|&t| entropy_sample(&to_fock_grid(&evolve(c0, table, t), table), t))
        .collect()
}

/// Reduced density elements assembled directly from the block eigenvectors
/// and the initial-state weights, without forming the evolved amplitudes.
/// `ρ_field[l, l']` sums over the medium occupancy `n` with totals `n + l` and
/// `n + l'`; `ρ_atom[l, l']` sums over the field occupancy instead.
pub fn closed_form_reduced<T: Real>(
    state: &InitialState<T>,
    table: &BlockTable<T>,
    t: T,
    which: Subsystem,
) -> Matrix<Complex<T>> {
    let n_max = table.n_max();
    let dim = n_max + 1;
    let weights = InitialWeights::new(state, n_max);
    Matrix::from_fn(dim, dim, |l, lp| {
        let mut acc = czero();
        for n in weights.n_min(l, lp)..=n_max.saturating_sub(l.max(lp)) {
            let (big_n, big_np) = (n + l, n + lp);
            let w = weights.pair(big_n, big_np);
            if w == czero() {
                continue;
            }
            // row of d selected by the kept occupancy
            let (row, rowp) = match which {
                Subsystem::Field => (n, n),
                Subsystem::Atom => (l, lp),
            };
            let (b, bp) = (table.block(big_n), table.block(big_np));
            let left = (0..=big_n).fold(czero(), |a, s| {
                a + phase_factor(b.lambdas()[s], t).scale(b.d(0, s) * b.d(row, s))
            });
            let right = (0..=big_np).fold(czero(), |a, s| {
                a + phase_factor(bp.lambdas()[s], t).scale(bp.d(0, s) * bp.d(rowp, s))
            });
            acc = acc + w * left * right.conj();
        }
        acc
    })
}

enum InitialWeights<T> {
    Fock(usize),
    Factorial { m: usize, w: FactorialWeights<T> },
}

impl<T: Real> InitialWeights<T> {
    fn new(state: &InitialState<T>, n_max: usize) -> Self {
        match *state {
            InitialState::Fock(n) => Self::Fock(n),
            InitialState::Coherent(alpha) if alpha.norm_sqr() > T::zero() => {
                Self::Factorial { m: 0, w: FactorialWeights::new(alpha, 0, n_max) }
            }
            InitialState::PhotonAdded { alpha, m } if alpha.norm_sqr() > T::zero() => {
                Self::Factorial { m, w: FactorialWeights::new(alpha, m, n_max) }
            }
            InitialState::Coherent(_) => Self::Fock(0),
            InitialState::PhotonAdded { m, .. } => Self::Fock(m),
        }
    }

    /// First summation index, `max(m - l, m - l', 0)`.
    fn n_min(&self, l: usize, lp: usize) -> usize {
        match self {
            Self::Fock(_) => 0,
            Self::Factorial { m, .. } => m.saturating_sub(l.min(lp)),
        }
    }

    fn pair(&self, big_n: usize, big_np: usize) -> Complex<T> {
        match self {
            Self::Fock(k) => {
                if big_n == *k && big_np == *k {
                    Complex::new(T::one(), T::zero())
                } else {
                    czero()
                }
            }
            Self::Factorial { w, .. } => w.pair(big_n, big_np),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::states::prepare;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn spectrum_examples() {
        let e = entropies_from_spectrum(&[0.0, 1.0f64]).unwrap();
        assert_eq!((e.svne, e.sle), (0.0, 0.0));
        let e = entropies_from_spectrum(&[0.5, 0.5f64]).unwrap();
        assert!((e.svne - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((e.sle - 0.5).abs() < 1e-15);
        let e = entropies_from_spectrum(&[0.25, 0.75f64]).unwrap();
        assert!((e.svne - 0.562_335_144_618_808_6).abs() < 1e-12);
        assert!((e.sle - 0.375).abs() < 1e-15);
    }

    #[test]
    fn clamps_round_off_and_rejects_real_negatives() {
        let e = entropies_from_spectrum(&[-5e-13, 1.0 + 5e-13f64]).unwrap();
        assert_eq!(e.svne, 0.0);
        assert!(matches!(entropies_from_spectrum(&[-1e-6, 1.0 + 1e-6f64]), Err(Error::NegativeEigenvalue(_))));
        assert!(matches!(entropies_from_spectrum(&[0.5, 0.49f64]), Err(Error::TraceDeviation(_))));
    }

    #[test]
    fn product_state_has_zero_entropy() {
        let u = [c(0.6), Complex::new(0.0, 0.8)];
        let v = [c(0.8), c(-0.6)];
        let grid = FockGrid::from_fn(2, |f, n| if f < 2 && n < 2 && f + n <= 1 { u[f] * v[n] } else { c(0.0) });
        // (f, n) = (1, 1) is outside N_max = 1 in block terms, so build on N_max = 2
        let mut full = grid.clone();
        full.blocks[2][1] = u[1] * v[1];
        for which in [Subsystem::Field, Subsystem::Atom] {
            let e = entropies(&reduce(&full, which).unwrap()).unwrap();
            assert!(e.svne.abs() < 1e-14 && e.sle.abs() < 1e-14);
        }
    }

    #[test]
    fn bell_like_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let grid = FockGrid::from_fn(1, |f, n| if f + n == 1 { c(h) } else { c(0.0) });
        let r = reduce(&grid, Subsystem::Field).unwrap();
        assert!((r.rho.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((r.rho.get(1, 1).re - 0.5).abs() < 1e-15);
        assert!(r.rho.get(0, 1).norm() < 1e-15);
        let e = entropies(&r).unwrap();
        assert!((e.svne - std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn fock_reduced_density_is_diagonal() {
        let p = ModelParams::<f64>::weak_nonlinearity();
        let (_, table, c0) = prepare(&InitialState::Fock(6), &p, 1e-12).unwrap();
        let grid = to_fock_grid(&evolve(&c0, &table, 0.77), &table);
        let rho = reduced_matrix(&grid, Subsystem::Field);
        for i in 0..rho.rows() {
            for j in 0..rho.cols() {
                if i != j {
                    assert_eq!(rho[(i, j)].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn subsystem_entropies_agree() {
        let p = ModelParams::<f64>::weak_nonlinearity();
        let state = InitialState::photon_added(Complex::new(1.0, 0.3), 2);
        let (_, table, c0) = prepare(&state, &p, 1e-12).unwrap();
        let series = entropy_timeseries(&c0, &table, &[0.0, 0.3, 1.1, 6.0]).unwrap();
        assert!(series[0].field.svne < 1e-8);
        for s in &series {
            assert!((s.field.svne - s.atom.svne).abs() < 1e-8);
            assert!((s.field.sle - s.atom.sle).abs() < 1e-8);
            assert!(s.field.svne >= s.field.sle);
        }
    }

    #[test]
    fn closed_form_matches_partial_trace() {
        let p = ModelParams::<f64>::weak_nonlinearity();
        for state in [
            InitialState::Fock(5),
            InitialState::Coherent(Complex::new(0.8, 0.5)),
            InitialState::photon_added(Complex::new(-0.4, 0.9), 3),
        ] {
            let (_, table, c0) = prepare(&state, &p, 1e-12).unwrap();
            let t = 2.9;
            let grid = to_fock_grid(&evolve(&c0, &table, t), &table);
            for which in [Subsystem::Field, Subsystem::Atom] {
                let direct = reduced_matrix(&grid, which);
                let closed = closed_form_reduced(&state, &table, t, which);
                for (a, b) in direct.as_slice().iter().zip(closed.as_slice()) {
                    assert!((*a - *b).norm() < 1e-10, "{state:?} {which:?}");
                }
            }
        }
    }
}
