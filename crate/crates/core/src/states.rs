//! Product initial states `|field> ⊗ |0>_b` and their projection onto the
//! block eigenbasis.

use crate::error::{Error, Result};
use crate::model::BlockTable;
use crate::scalar::{czero, Complex, Real};

/// Default truncation tolerance on the discarded Fock-tail weight.
pub const DEFAULT_EPS_TRUNC: f64 = 1e-12;

/// Field part of a product initial state; the medium always starts in its
/// ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState<T> {
    /// Number state `|n>`.
    Fock(usize),
    /// Coherent state `|alpha>`.
    Coherent(Complex<T>),
    /// `(a†)^m |alpha>` normalized by `sqrt(m! L_m(-|alpha|²))`, `m >= 1`.
    PhotonAdded { alpha: Complex<T>, m: usize },
}

impl<T: Real> InitialState<T> {
    /// Photon-added coherent state; `m = 0` collapses to [`InitialState::Coherent`].
    pub fn photon_added(alpha: Complex<T>, m: usize) -> Self {
        if m == 0 {
            Self::Coherent(alpha)
        } else {
            Self::PhotonAdded { alpha, m }
        }
    }

    /// `|alpha|²` for the coherent families, `0` for a Fock state.
    pub fn nu(&self) -> T {
        match self {
            Self::Fock(_) => T::zero(),
            Self::Coherent(a) | Self::PhotonAdded { alpha: a, .. } => a.norm_sqr(),
        }
    }

    /// Number of photons added (`0` for Fock and coherent states).
    pub fn added_photons(&self) -> usize {
        match self {
            Self::PhotonAdded { m, .. } => *m,
            _ => 0,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Fock(_) => Ok(()),
            Self::Coherent(a) | Self::PhotonAdded { alpha: a, .. } => {
                if a.re.is_finite() && a.im.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidInput("alpha must be finite".into()))
                }
            }
        }
    }
}

/// Fock amplitudes `f[l]` of the field, truncated at `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldAmplitudes<T> {
    pub f: Vec<Complex<T>>,
    pub n_max: usize,
    /// Probability weight discarded above `n_max`.
    pub tail_weight: T,
}

impl<T: Real> FieldAmplitudes<T> {
    pub fn norm_sqr(&self) -> T {
        self.f.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Coefficients `c[N][s] = <psi_{N s} | psi(0)>`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenbasisCoefficients<T> {
    pub blocks: Vec<Vec<Complex<T>>>,
}

impl<T: Real> EigenbasisCoefficients<T> {
    pub fn norm_sqr(&self) -> T {
        self.blocks.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    pub fn n_max(&self) -> usize {
        self.blocks.len() - 1
    }
}

/// `ln k!` for `k = 0..len`.
pub(crate) fn ln_factorials<T: Real>(len: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(len.max(1));
    let mut acc = T::zero();
    out.push(acc);
    for k in 1..len {
        acc += T::from_index(k).ln();
        out.push(acc);
    }
    out
}

/// `ln L_m(x)` for `x <= 0` (where every term of the recurrence is
/// positive), by upward recurrence with periodic rescaling.
pub fn ln_laguerre_neg<T: Real>(m: usize, x: T) -> T {
    debug_assert!(x <= T::zero());
    let mut prev = T::one();
    if m == 0 {
        return T::zero();
    }
    let mut cur = T::one() - x;
    let mut log_scale = T::zero();
    let big = T::lit(1e100);
    for k in 1..m {
        let kf = T::from_index(k);
        let next = ((T::lit(2.0) * kf + T::one() - x) * cur - kf * prev) / (kf + T::one());
        prev = cur;
        cur = next;
        if cur > big {
            prev = prev / big;
            cur = cur / big;
            log_scale += big.ln();
        }
    }
    cur.ln() + log_scale
}

/// Lazily evaluated amplitude sequence for one state.
struct AmplitudeGenerator<T> {
    kind: Kind<T>,
}

enum Kind<T> {
    Single(usize),
    /// amplitude(k) = exp(log_norm + (k-m) ln|alpha| + ½ ln k! − ln (k−m)!) · e^{i (k−m) arg alpha}
    Shifted { m: usize, ln_abs_alpha: T, arg: T, log_norm: T },
}

impl<T: Real> AmplitudeGenerator<T> {
    fn new(state: &InitialState<T>) -> Self {
        let (alpha, m) = match *state {
            InitialState::Fock(n) => return Self { kind: Kind::Single(n) },
            InitialState::Coherent(a) => (a, 0),
            InitialState::PhotonAdded { alpha, m } => (alpha, m),
        };
        let nu = alpha.norm_sqr();
        if nu == T::zero() {
            // (a†)^m |0> normalized is |m>
            return Self { kind: Kind::Single(m) };
        }
        let lnf_m = ln_factorials::<T>(m + 1)[m];
        let log_norm = -nu * T::lit(0.5) - T::lit(0.5) * (lnf_m + ln_laguerre_neg(m, -nu));
        Self { kind: Kind::Shifted { m, ln_abs_alpha: alpha.norm().ln(), arg: alpha.arg(), log_norm } }
    }

    fn amplitude(&self, k: usize, lnf: &[T]) -> Complex<T> {
        match self.kind {
            Kind::Single(n) => {
                if k == n {
                    Complex::new(T::one(), T::zero())
                } else {
                    czero()
                }
            }
            Kind::Shifted { m, ln_abs_alpha, arg, log_norm } => {
                if k < m {
                    return czero();
                }
                let j = T::from_index(k - m);
                let ln_mag = log_norm + j * ln_abs_alpha + T::lit(0.5) * lnf[k] - lnf[k - m];
                Complex::from_polar(ln_mag.exp(), j * arg)
            }
        }
    }

    /// Weights `|f[k]|²` out to a point where the remaining tail is provably
    /// below `eps * 1e-3`, plus an upper bound on the weight beyond the scan.
    fn scan(&self, eps: T) -> (Vec<T>, T) {
        match self.kind {
            Kind::Single(n) => {
                let mut w = vec![T::zero(); n + 1];
                w[n] = T::one();
                (w, T::zero())
            }
            Kind::Shifted { m, ln_abs_alpha, .. } => {
                let nu = (ln_abs_alpha + ln_abs_alpha).exp();
                let half = T::lit(0.5);
                let mut weights = Vec::new();
                let mut lnf = ln_factorials::<T>(64);
                let mut k = 0usize;
                loop {
                    if k >= lnf.len() {
                        lnf = ln_factorials(lnf.len() * 2);
                    }
                    let w = self.amplitude(k, &lnf).norm_sqr();
                    weights.push(w);
                    if k > m {
                        // ratio w[k+1]/w[k] = nu (k+1) / (k+1-m)², decreasing in k
                        let kp = T::from_index(k + 1);
                        let shifted = T::from_index(k + 1 - m);
                        let ratio = nu * kp / (shifted * shifted);
                        if ratio < half && w <= eps * T::lit(1e-3) {
                            let beyond = w * ratio / (T::one() - ratio);
                            return (weights, beyond);
                        }
                    }
                    k += 1;
                }
            }
        }
    }
}

/// Smallest `N_max` with discarded tail weight `<= eps`, and that weight.
fn cutoff_with_tail<T: Real>(state: &InitialState<T>, eps: T) -> Result<(usize, T)> {
    check_eps(eps)?;
    state.validate()?;
    let gen = AmplitudeGenerator::new(state);
    let (weights, beyond) = gen.scan(eps);
    // tail[k] = weight strictly above k, summed from the far end
    let mut tail = beyond;
    let mut best = (weights.len() - 1, beyond);
    for k in (0..weights.len()).rev() {
        if tail <= eps {
            best = (k, tail);
        } else {
            break;
        }
        tail += weights[k];
    }
    Ok(best)
}

fn check_eps<T: Real>(eps: T) -> Result<()> {
    if eps > T::zero() && eps <= T::lit(1e-6) {
        Ok(())
    } else {
        Err(Error::TruncationTolerance(eps.as_f64()))
    }
}

/// Smallest Fock cutoff whose discarded tail weight is at most `eps`.
pub fn required_cutoff<T: Real>(state: &InitialState<T>, eps: T) -> Result<usize> {
    cutoff_with_tail(state, eps).map(|(n, _)| n)
}

pub fn field_amplitudes<T: Real>(state: &InitialState<T>, eps: T) -> Result<FieldAmplitudes<T>> {
    let (n_max, tail_weight) = cutoff_with_tail(state, eps)?;
    let gen = AmplitudeGenerator::new(state);
    let lnf = ln_factorials::<T>(n_max + 1);
    let f = (0..=n_max).map(|k| gen.amplitude(k, &lnf)).collect();
    Ok(FieldAmplitudes { f, n_max, tail_weight })
}

/// `c[N][s] = f[N] d_0^{N s}`: the medium ground state selects the `n = 0`
/// row of every block.
pub fn project<T: Real>(amps: &FieldAmplitudes<T>, table: &BlockTable<T>) -> Result<EigenbasisCoefficients<T>> {
    if table.n_max() < amps.n_max {
        return Err(Error::TableTooSmall { required: amps.n_max, available: table.n_max() });
    }
    let blocks = amps
        .f
        .iter()
        .enumerate()
        .map(|(nt, &fn_)| {
            let b = table.block(nt);
            (0..b.dim()).map(|s| fn_.scale(b.d(0, s))).collect()
        })
        .collect();
    Ok(EigenbasisCoefficients { blocks })
}

/// Convenience: amplitudes, table sized to the cutoff, and coefficients.
pub fn prepare<T: Real>(
    state: &InitialState<T>,
    params: &crate::model::ModelParams<T>,
    eps: T,
) -> Result<(FieldAmplitudes<T>, BlockTable<T>, EigenbasisCoefficients<T>)> {
    let amps = field_amplitudes(state, eps)?;
    let table = BlockTable::build(params, amps.n_max)?;
    let coeffs = project(&amps, &table)?;
    Ok((amps, table, coeffs))
}
