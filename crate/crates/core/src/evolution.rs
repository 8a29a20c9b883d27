//! Exact time evolution from the block spectra:
//! `|psi(t)> = Σ_{N,s} exp(-i λ_{Ns} t) <psi_{Ns}|psi(0)> |psi_{Ns}>`.

use crate::error::Result;
use crate::linalg::Matrix;
use crate::model::BlockTable;
use crate::scalar::{czero, Complex, Real};
use crate::states::{ln_factorials, ln_laguerre_neg, EigenbasisCoefficients, InitialState};

/// `exp(-i λ t)` with `λ t` reduced modulo `2π` before the trig calls. The
/// rounding error of the product is recovered with a fused multiply-add and
/// `2π` is carried as a two-term sum, so large `t` keeps full phase accuracy.
pub fn phase_factor<T: Real>(lambda: T, t: T) -> Complex<T> {
    let p = lambda * t;
    let p_err = lambda.mul_add(t, -p);
    let hi = T::TAU();
    let lo = T::lit(std::f64::consts::TAU - hi.as_f64()) + T::lit(2.449_293_598_294_706_4e-16);
    let k = (p / hi).round();
    let r = (-k).mul_add(hi, p) - k * lo + p_err;
    Complex::new(r.cos(), -r.sin())
}

/// `c_t[N][s] = exp(-i λ_{Ns} t) c[N][s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedState<T> {
    pub t: T,
    pub blocks: Vec<Vec<Complex<T>>>,
}

impl<T: Real> EvolvedState<T> {
    pub fn norm_sqr(&self) -> T {
        self.blocks.iter().flatten().map(|z| z.norm_sqr()).sum()
    }
}

pub fn evolve<T: Real>(c0: &EigenbasisCoefficients<T>, table: &BlockTable<T>, t: T) -> EvolvedState<T> {
    if t == T::zero() {
        return EvolvedState { t, blocks: c0.blocks.clone() };
    }
    let blocks = c0
        .blocks
        .iter()
        .enumerate()
        .map(|(nt, blk)| {
            let lambdas = table.block(nt).lambdas();
            blk.iter().zip(lambdas).map(|(&c, &l)| c * phase_factor(l, t)).collect()
        })
        .collect();
    EvolvedState { t, blocks }
}

/// Amplitudes on the product Fock basis, grouped by total number:
/// `blocks[N][n]` is the amplitude of `|N-n; n>` (field `N-n`, medium `n`).
#[derive(Debug, Clone, PartialEq)]
pub struct FockGrid<T> {
    pub blocks: Vec<Vec<Complex<T>>>,
}

impl<T: Real> FockGrid<T> {
    pub fn zeros(n_max: usize) -> Self {
        Self { blocks: (0..=n_max).map(|nt| vec![czero(); nt + 1]).collect() }
    }

    /// Grid from a function of `(field, atom)` occupancy.
    pub fn from_fn(n_max: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        Self { blocks: (0..=n_max).map(|nt| (0..=nt).map(|n| f(nt - n, n)).collect()).collect() }
    }

    pub fn n_max(&self) -> usize {
        self.blocks.len() - 1
    }

    /// Amplitude of `|field; atom>`; zero outside the grid.
    pub fn get(&self, field: usize, atom: usize) -> Complex<T> {
        self.blocks.get(field + atom).map_or(czero(), |b| b[atom])
    }

    pub fn norm_sqr(&self) -> T {
        self.blocks.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FockGrid<T>) -> Complex<T> {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b))
            .fold(czero(), |acc, (x, y)| acc + x.conj() * y)
    }
}

pub fn to_fock_grid<T: Real>(state: &EvolvedState<T>, table: &BlockTable<T>) -> FockGrid<T> {
    let blocks = state
        .blocks
        .iter()
        .enumerate()
        .map(|(nt, ct)| {
            let b = table.block(nt);
            (0..=nt)
                .map(|n| ct.iter().enumerate().fold(czero(), |acc, (s, &c)| acc + c.scale(b.d(n, s))))
                .collect()
        })
        .collect();
    FockGrid { blocks }
}

/// Inverse of [`to_fock_grid`]: `c[N][s] = Σ_n d[n][s] A[N-n, n]` for an
/// arbitrary state given on the grid.
pub fn project_grid<T: Real>(grid: &FockGrid<T>, table: &BlockTable<T>) -> Result<EigenbasisCoefficients<T>> {
    if table.n_max() < grid.n_max() {
        return Err(crate::error::Error::TableTooSmall { required: grid.n_max(), available: table.n_max() });
    }
    let blocks = grid
        .blocks
        .iter()
        .enumerate()
        .map(|(nt, a)| {
            let b = table.block(nt);
            (0..=nt).map(|s| a.iter().enumerate().fold(czero(), |acc, (n, &x)| acc + x.scale(b.d(n, s)))).collect()
        })
        .collect();
    Ok(EigenbasisCoefficients { blocks })
}

/// `|<psi(0)|psi(t)>|²`.
pub fn overlap<T: Real>(c0: &EigenbasisCoefficients<T>, st: &EvolvedState<T>) -> T {
    c0.blocks
        .iter()
        .zip(&st.blocks)
        .flat_map(|(a, b)| a.iter().zip(b))
        .fold(czero(), |acc, (x, y)| acc + x.conj() * y)
        .norm_sqr()
}

/// Weights `|c[N][s]|²` and eigenvalues flattened, so that the overlap
/// `|Σ w exp(-i λ t)|²` can be scanned densely without rebuilding states.
#[derive(Debug, Clone)]
pub struct OverlapSpectrum<T> {
    lambdas: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> OverlapSpectrum<T> {
    pub fn new(c0: &EigenbasisCoefficients<T>, table: &BlockTable<T>) -> Self {
        let mut lambdas = Vec::new();
        let mut weights = Vec::new();
        for (nt, blk) in c0.blocks.iter().enumerate() {
            for (&c, &l) in blk.iter().zip(table.block(nt).lambdas()) {
                let w = c.norm_sqr();
                if w > T::zero() {
                    lambdas.push(l);
                    weights.push(w);
                }
            }
        }
        Self { lambdas, weights }
    }

    pub fn overlap(&self, t: T) -> T {
        self.lambdas
            .iter()
            .zip(&self.weights)
            .fold(czero(), |acc, (&l, &w)| acc + phase_factor(l, t).scale(w))
            .norm_sqr()
    }

    /// `<H> = Σ λ |c|²`, conserved.
    pub fn energy(&self) -> T {
        self.lambdas.iter().zip(&self.weights).map(|(&l, &w)| l * w).sum()
    }
}

/// `<N_tot> = Σ_N N Σ_s |c[N][s]|²`.
pub fn mean_total_number<T: Real>(blocks: &[Vec<Complex<T>>]) -> T {
    blocks
        .iter()
        .enumerate()
        .map(|(nt, b)| T::from_index(nt) * b.iter().map(|z| z.norm_sqr()).sum::<T>())
        .sum()
}

/// Full density matrix `ρ(t)` in the block eigenbasis. Its size grows as
/// `(Σ (N+1))²`, so it is only meant for checks on small cutoffs.
#[derive(Debug, Clone)]
pub struct EigenDensity<T> {
    offsets: Vec<usize>,
    rho: Matrix<Complex<T>>,
}

impl<T: Real> EigenDensity<T> {
    /// `<psi_{M l}| ρ(t) |psi_{M' l'}>`.
    pub fn element(&self, (m, l): (usize, usize), (mp, lp): (usize, usize)) -> Complex<T> {
        self.rho[(self.offsets[m] + l, self.offsets[mp] + lp)]
    }

    pub fn matrix(&self) -> &Matrix<Complex<T>> {
        &self.rho
    }

    pub fn trace(&self) -> T {
        (0..self.rho.rows()).map(|i| self.rho[(i, i)].re).sum()
    }

    /// `max |ρ² − ρ|`; zero for a pure state.
    pub fn idempotency_defect(&self) -> T {
        let sq = self.rho.matmul(&self.rho);
        sq.as_slice().iter().zip(self.rho.as_slice()).map(|(a, b)| (*a - *b).norm()).fold(T::zero(), T::max)
    }
}

pub fn density_matrix_elements<T: Real>(st: &EvolvedState<T>) -> EigenDensity<T> {
    let mut offsets = Vec::with_capacity(st.blocks.len());
    let mut flat = Vec::new();
    for blk in &st.blocks {
        offsets.push(flat.len());
        flat.extend_from_slice(blk);
    }
    let n = flat.len();
    let rho = Matrix::from_fn(n, n, |i, j| flat[i] * flat[j].conj());
    EigenDensity { offsets, rho }
}

/// Log-magnitude and phase of the unnormalized factorial weight
/// `sqrt(N!) α^{N-m} / (N-m)!` of a photon-added coherent state.
pub(crate) struct FactorialWeights<T> {
    m: usize,
    ln_abs_alpha: T,
    arg: T,
    /// `ln(e^{-ν} / (m! L_m(-ν)))`
    ln_prefactor: T,
    lnf: Vec<T>,
}

impl<T: Real> FactorialWeights<T> {
    pub(crate) fn new(alpha: Complex<T>, m: usize, n_max: usize) -> Self {
        let nu = alpha.norm_sqr();
        let lnf = ln_factorials::<T>(n_max.max(m) + 1);
        let ln_prefactor = -nu - lnf[m] - ln_laguerre_neg(m, -nu);
        Self { m, ln_abs_alpha: alpha.norm().ln(), arg: alpha.arg(), ln_prefactor, lnf }
    }

    /// `sqrt(N! N'!) α^{N-m} α*^{N'-m} / ((N-m)! (N'-m)!)` times the
    /// normalization prefactor; zero when either index is below `m`.
    pub(crate) fn pair(&self, big_n: usize, big_np: usize) -> Complex<T> {
        let m = self.m;
        if big_n < m || big_np < m {
            return czero();
        }
        let (j, jp) = (big_n - m, big_np - m);
        let ln_abs = |k: usize| if k == 0 { T::zero() } else { T::from_index(k) * self.ln_abs_alpha };
        let ln_mag = self.ln_prefactor
            + T::lit(0.5) * (self.lnf[big_n] + self.lnf[big_np])
            + ln_abs(j)
            + ln_abs(jp)
            - self.lnf[j]
            - self.lnf[jp];
        let phase = (T::from_index(j) - T::from_index(jp)) * self.arg;
        Complex::from_polar(ln_mag.exp(), phase)
    }
}

/// Closed-form `<psi_{M l}| ρ(t) |psi_{M' l'}>` for a product initial state
/// with the medium in its ground state: the Fock case is confined to block
/// `N`, the coherent and photon-added cases carry the factorial weights.
pub fn closed_form_density_element<T: Real>(
    state: &InitialState<T>,
    table: &BlockTable<T>,
    t: T,
    (big_m, l): (usize, usize),
    (big_mp, lp): (usize, usize),
) -> Result<Complex<T>> {
    let bm = table.block(big_m);
    let bmp = table.block(big_mp);
    let evolution = phase_factor(bm.lambdas()[l], t) * phase_factor(bmp.lambdas()[lp], t).conj();
    let dd = bm.d(0, l) * bmp.d(0, lp);
    let weight = match *state {
        InitialState::Fock(n) => {
            if big_m == n && big_mp == n {
                Complex::new(T::one(), T::zero())
            } else {
                czero()
            }
        }
        InitialState::Coherent(alpha) => pacs_pair(alpha, 0, big_m, big_mp),
        InitialState::PhotonAdded { alpha, m } => pacs_pair(alpha, m, big_m, big_mp),
    };
    Ok(weight * evolution.scale(dd))
}

fn pacs_pair<T: Real>(alpha: Complex<T>, m: usize, big_m: usize, big_mp: usize) -> Complex<T> {
    if alpha.norm_sqr() == T::zero() {
        return if big_m == m && big_mp == m { Complex::new(T::one(), T::zero()) } else { czero() };
    }
    FactorialWeights::new(alpha, m, big_m.max(big_mp)).pair(big_m, big_mp)
}
