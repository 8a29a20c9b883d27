//! Quadrature moments, photon numbers and higher-order squeezing, all
//! evaluated by applying ladder operators to the Fock-grid amplitudes.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::{evolve, to_fock_grid, FockGrid};
use crate::model::BlockTable;
use crate::scalar::{czero, Complex, Real};
use crate::states::EigenbasisCoefficients;

/// Relative margin below the threshold required before squeezing is declared.
/// Number states sit exactly on the threshold and must not flip on round-off.
pub const SQUEEZE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Field,
    Atom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderOperator {
    Annihilate(Mode),
    Create(Mode),
}

/// `a` or `b` applied to the grid. The result keeps the same `N_max`; its top
/// block is zero.
pub fn annihilate<T: Real>(grid: &FockGrid<T>, mode: Mode) -> FockGrid<T> {
    let mut out = FockGrid::zeros(grid.n_max());
    for (nt, blk) in grid.blocks.iter().enumerate().skip(1) {
        for (n, &amp) in blk.iter().enumerate() {
            match mode {
                Mode::Field if n < nt => {
                    out.blocks[nt - 1][n] = amp.scale(T::from_index(nt - n).sqrt());
                }
                Mode::Atom if n > 0 => {
                    out.blocks[nt - 1][n - 1] = amp.scale(T::from_index(n).sqrt());
                }
                _ => {}
            }
        }
    }
    out
}

/// `a†` or `b†` applied to the grid, which grows by one level.
pub fn create<T: Real>(grid: &FockGrid<T>, mode: Mode) -> FockGrid<T> {
    let mut out = FockGrid::zeros(grid.n_max() + 1);
    for (nt, blk) in grid.blocks.iter().enumerate() {
        for (n, &amp) in blk.iter().enumerate() {
            match mode {
                Mode::Field => out.blocks[nt + 1][n] = amp.scale(T::from_index(nt - n + 1).sqrt()),
                Mode::Atom => out.blocks[nt + 1][n + 1] = amp.scale(T::from_index(n + 1).sqrt()),
            }
        }
    }
    out
}

pub fn ladder_apply<T: Real>(op: LadderOperator, grid: &FockGrid<T>) -> FockGrid<T> {
    match op {
        LadderOperator::Annihilate(m) => annihilate(grid, m),
        LadderOperator::Create(m) => create(grid, m),
    }
}

fn add_scaled<T: Real>(acc: &mut FockGrid<T>, coef: Complex<T>, g: &FockGrid<T>) {
    while acc.n_max() < g.n_max() {
        let next = acc.blocks.len();
        acc.blocks.push(vec![czero(); next + 1]);
    }
    for (a, b) in acc.blocks.iter_mut().zip(&g.blocks) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = *x + coef * y;
        }
    }
}

/// Linear combination `Σ c_k L_k^{p_k}` of powers of single ladder operators.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderSum<T> {
    pub terms: Vec<(Complex<T>, LadderOperator, usize)>,
}

impl<T: Real> LadderSum<T> {
    pub fn apply(&self, grid: &FockGrid<T>) -> FockGrid<T> {
        let mut acc = FockGrid::zeros(grid.n_max());
        for &(coef, op, power) in &self.terms {
            let mut g = grid.clone();
            for _ in 0..power {
                g = ladder_apply(op, &g);
            }
            add_scaled(&mut acc, coef, &g);
        }
        acc
    }

    /// `O^k |ψ>` for `k = 0..=k_max`.
    fn powers(&self, grid: &FockGrid<T>, k_max: usize) -> Vec<FockGrid<T>> {
        let mut out = vec![grid.clone()];
        for _ in 0..k_max {
            let next = self.apply(out.last().unwrap());
            out.push(next);
        }
        out
    }
}

/// Builds `(c_a a^q + c_ad a†^q + c_b b^q + c_bd b†^q)` for the symmetric
/// two-mode combinations below.
fn two_mode<T: Real>(lower: Complex<T>, raise: Complex<T>, q: usize) -> LadderSum<T> {
    use LadderOperator::*;
    LadderSum {
        terms: vec![
            (lower, Annihilate(Mode::Field), q),
            (raise, Create(Mode::Field), q),
            (lower, Annihilate(Mode::Atom), q),
            (raise, Create(Mode::Atom), q),
        ],
    }
}

fn one_mode<T: Real>(mode: Mode, lower: Complex<T>, raise: Complex<T>) -> LadderSum<T> {
    use LadderOperator::*;
    LadderSum { terms: vec![(lower, Annihilate(mode), 1), (raise, Create(mode), 1)] }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureKind {
    /// `(x_a + x_b) / 2`
    Xi,
    /// `(p_a + p_b) / 2`
    Eta,
    XA,
    PA,
    XB,
    PB,
}

impl QuadratureKind {
    /// With `x = (c + c†)/√2` and `p = (c - c†)/(i√2)` for each mode.
    pub fn operator<T: Real>(self) -> LadderSum<T> {
        let r = T::FRAC_1_SQRT_2();
        let h = r * T::lit(0.5);
        match self {
            Self::Xi => two_mode(Complex::new(h, T::zero()), Complex::new(h, T::zero()), 1),
            Self::Eta => two_mode(Complex::new(T::zero(), -h), Complex::new(T::zero(), h), 1),
            Self::XA => one_mode(Mode::Field, Complex::new(r, T::zero()), Complex::new(r, T::zero())),
            Self::PA => one_mode(Mode::Field, Complex::new(T::zero(), -r), Complex::new(T::zero(), r)),
            Self::XB => one_mode(Mode::Atom, Complex::new(r, T::zero()), Complex::new(r, T::zero())),
            Self::PB => one_mode(Mode::Atom, Complex::new(T::zero(), -r), Complex::new(T::zero(), r)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadratureSpec {
    pub kind: QuadratureKind,
    pub order: usize,
}

impl QuadratureSpec {
    pub const MAX_ORDER: usize = 4;

    pub fn new(kind: QuadratureKind, order: usize) -> Result<Self> {
        if order == 0 || order > Self::MAX_ORDER {
            return Err(Error::InvalidInput(format!("moment order {order} outside 1..={}", Self::MAX_ORDER)));
        }
        Ok(Self { kind, order })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HigherQuadrature {
    Z1,
    Z2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HigherQuadratureSpec {
    pub which: HigherQuadrature,
    pub q: usize,
}

impl HigherQuadratureSpec {
    pub const MAX_Q: usize = 3;

    pub fn new(which: HigherQuadrature, q: usize) -> Result<Self> {
        if q == 0 || q > Self::MAX_Q {
            return Err(Error::InvalidInput(format!("quadrature power {q} outside 1..={}", Self::MAX_Q)));
        }
        Ok(Self { which, q })
    }

    /// `Z1 = (a^q + a†^q + b^q + b†^q)/(2√2)`,
    /// `Z2 = (a^q - a†^q + b^q - b†^q)/(2i√2)`.
    pub fn operator<T: Real>(&self) -> LadderSum<T> {
        let h = T::FRAC_1_SQRT_2() * T::lit(0.5);
        match self.which {
            HigherQuadrature::Z1 => two_mode(Complex::new(h, T::zero()), Complex::new(h, T::zero()), self.q),
            HigherQuadrature::Z2 => two_mode(Complex::new(T::zero(), -h), Complex::new(T::zero(), h), self.q),
        }
    }
}

fn real_part<T: Real>(z: Complex<T>) -> Result<T> {
    if z.im.abs() > T::tol(1e-10) * z.re.abs().max(T::one()) {
        return Err(Error::ImaginaryResidue(z.im.as_f64()));
    }
    Ok(z.re)
}

/// Raw moment `<O^k>` of a Hermitian quadrature, computed as
/// `<O^{⌊k/2⌋} ψ | O^{⌈k/2⌉} ψ>`.
pub fn moment<T: Real>(grid: &FockGrid<T>, spec: QuadratureSpec) -> Result<T> {
    let op = spec.kind.operator::<T>();
    let pw = op.powers(grid, spec.order.div_ceil(2));
    real_part(pw[spec.order / 2].inner(&pw[spec.order.div_ceil(2)]))
}

/// First four raw moments of one quadrature and the derived statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureMoments<T> {
    pub raw: [T; 4],
}

impl<T: Real> QuadratureMoments<T> {
    pub fn compute(grid: &FockGrid<T>, kind: QuadratureKind) -> Result<Self> {
        let pw = kind.operator::<T>().powers(grid, 2);
        let raw = [
            real_part(pw[0].inner(&pw[1]))?,
            real_part(pw[1].inner(&pw[1]))?,
            real_part(pw[1].inner(&pw[2]))?,
            real_part(pw[2].inner(&pw[2]))?,
        ];
        Ok(Self { raw })
    }

    pub fn mean(&self) -> T {
        self.raw[0]
    }

    pub fn variance(&self) -> T {
        (self.raw[1] - self.raw[0] * self.raw[0]).max(T::zero())
    }

    pub fn std_dev(&self) -> T {
        self.variance().sqrt()
    }

    /// Third standardized moment; zero when the variance vanishes.
    pub fn skewness(&self) -> T {
        let [m1, m2, m3, _] = self.raw;
        let var = self.variance();
        if var == T::zero() {
            return T::zero();
        }
        let c3 = m3 - T::lit(3.0) * m1 * m2 + T::lit(2.0) * m1 * m1 * m1;
        c3 / (var * var.sqrt())
    }

    /// Fourth standardized moment (not excess); zero when the variance vanishes.
    pub fn kurtosis(&self) -> T {
        let [m1, m2, m3, m4] = self.raw;
        let var = self.variance();
        if var == T::zero() {
            return T::zero();
        }
        let m1s = m1 * m1;
        let c4 = m4 - T::lit(4.0) * m1 * m3 + T::lit(6.0) * m1s * m2 - T::lit(3.0) * m1s * m1s;
        c4 / (var * var)
    }
}

/// `Δξ = sqrt(<ξ²> - <ξ>²)`.
pub fn std_dev_xi<T: Real>(grid: &FockGrid<T>) -> Result<T> {
    let op = QuadratureKind::Xi.operator::<T>();
    let pw = op.powers(grid, 1);
    let m1 = real_part(pw[0].inner(&pw[1]))?;
    let m2 = real_part(pw[1].inner(&pw[1]))?;
    Ok((m2 - m1 * m1).max(T::zero()).sqrt())
}

/// `<a†a>` or `<b†b>`.
pub fn mean_photon<T: Real>(grid: &FockGrid<T>, mode: Mode) -> T {
    grid.blocks
        .iter()
        .enumerate()
        .flat_map(|(nt, b)| b.iter().enumerate().map(move |(n, z)| (nt, n, z)))
        .map(|(nt, n, z)| {
            let occ = match mode {
                Mode::Field => nt - n,
                Mode::Atom => n,
            };
            T::from_index(occ) * z.norm_sqr()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingReport<T> {
    pub variance: T,
    /// `½ |<[Z1, Z2]>|`
    pub threshold: T,
    pub squeezed: bool,
}

/// Variance of `Z1` or `Z2` against the commutator bound. Squeezing is
/// declared when the variance falls below the bound by more than
/// [`SQUEEZE_MARGIN`] (relative).
pub fn higher_quadrature_variance<T: Real>(grid: &FockGrid<T>, spec: HigherQuadratureSpec) -> Result<SqueezingReport<T>> {
    let z1 = HigherQuadratureSpec { which: HigherQuadrature::Z1, q: spec.q }.operator::<T>().apply(grid);
    let z2 = HigherQuadratureSpec { which: HigherQuadrature::Z2, q: spec.q }.operator::<T>().apply(grid);
    // <[Z1, Z2]> = 2i Im <Z1 ψ | Z2 ψ>
    let threshold = z1.inner(&z2).im.abs();
    let z = match spec.which {
        HigherQuadrature::Z1 => &z1,
        HigherQuadrature::Z2 => &z2,
    };
    let mean = real_part(grid.inner(z))?;
    let variance = (z.norm_sqr() - mean * mean).max(T::zero());
    let squeezed = variance < threshold * (T::one() - T::lit(SQUEEZE_MARGIN));
    Ok(SqueezingReport { variance, threshold, squeezed })
}

/// A moment evaluated along a list of times.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSeries<T> {
    pub spec: QuadratureSpec,
    pub times: Vec<T>,
    pub values: Vec<T>,
}

pub fn moment_series<T: Real>(
    c0: &EigenbasisCoefficients<T>,
    table: &BlockTable<T>,
    times: &[T],
    spec: QuadratureSpec,
) -> Result<MomentSeries<T>> {
    let values = times
        .par_iter()
        .map(|&t| moment(&to_fock_grid(&evolve(c0, table, t), table), spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentSeries { spec, times: times.to_vec(), values })
}

/// `<ψ_{Ns}| c |ψ_{N's'}>` for `c = a` or `b` from the block eigenvectors.
/// Nonzero only for `N = N' - 1`.
pub fn eigenbasis_ladder_element<T: Real>(
    table: &BlockTable<T>,
    mode: Mode,
    (big_n, s): (usize, usize),
    (big_np, sp): (usize, usize),
) -> T {
    if big_n + 1 != big_np {
        return T::zero();
    }
    let (b, bp) = (table.block(big_n), table.block(big_np));
    match mode {
        Mode::Field => (0..=big_n).map(|n| T::from_index(big_np - n).sqrt() * b.d(n, s) * bp.d(n, sp)).sum(),
        Mode::Atom => (1..=big_np).map(|n| T::from_index(n).sqrt() * b.d(n - 1, s) * bp.d(n, sp)).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::states::{prepare, InitialState};

    fn vacuum() -> FockGrid<f64> {
        FockGrid::from_fn(0, |_, _| Complex::new(1.0, 0.0))
    }

    #[test]
    fn lowering_a_single_quantum() {
        let g = FockGrid::from_fn(1, |f, n| if (f, n) == (1, 0) { Complex::new(1.0, 0.0) } else { czero() });
        let out = annihilate(&g, Mode::Field);
        assert_eq!(out.get(0, 0), Complex::new(1.0, 0.0));
        assert_eq!(out.norm_sqr(), 1.0);
        assert_eq!(annihilate(&g, Mode::Atom).norm_sqr(), 0.0);
    }

    #[test]
    fn create_then_annihilate_counts() {
        let g = FockGrid::from_fn(3, |f, n| if (f, n) == (2, 1) { Complex::new(1.0, 0.0) } else { czero() });
        // a a† |2;1> = 3 |2;1>
        let back = annihilate(&create(&g, Mode::Field), Mode::Field);
        assert!((back.get(2, 1) - Complex::new(3.0, 0.0)).norm() < 1e-14);
        let back = annihilate(&create(&g, Mode::Atom), Mode::Atom);
        assert!((back.get(2, 1) - Complex::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn coherent_field_is_annihilator_eigenstate() {
        let alpha = Complex::new(0.7, -0.2);
        let p = ModelParams::<f64>::weak_nonlinearity();
        let (_, table, c0) = prepare(&InitialState::Coherent(alpha), &p, 1e-12).unwrap();
        let g = to_fock_grid(&evolve(&c0, &table, 0.0), &table);
        let lowered = annihilate(&g, Mode::Field);
        for nt in 0..table.n_max() {
            for n in 0..=nt {
                assert!((lowered.get(nt - n, n) - alpha * g.get(nt - n, n)).norm() < 1e-7);
            }
        }
    }

    #[test]
    fn vacuum_quadratures() {
        let v = vacuum();
        assert!((moment(&v, QuadratureSpec::new(QuadratureKind::Xi, 2).unwrap()).unwrap() - 0.25).abs() < 1e-15);
        assert!((std_dev_xi(&v).unwrap() - 0.5).abs() < 1e-15);
        let m = QuadratureMoments::compute(&v, QuadratureKind::Eta).unwrap();
        assert!((m.variance() - 0.25).abs() < 1e-15);
        // Gaussian kurtosis
        assert!((m.kurtosis() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn vacuum_higher_order_sits_on_threshold() {
        let v = vacuum();
        for q in 1..=2 {
            let r = higher_quadrature_variance(&v, HigherQuadratureSpec::new(HigherQuadrature::Z1, q).unwrap()).unwrap();
            assert!(!r.squeezed);
            assert!((r.variance - r.threshold).abs() < 1e-14);
        }
        let r = higher_quadrature_variance(&v, HigherQuadratureSpec::new(HigherQuadrature::Z1, 2).unwrap()).unwrap();
        assert!((r.variance - 0.5).abs() < 1e-15);
    }

    #[test]
    fn coherent_mean_at_zero_time() {
        let p = ModelParams::<f64>::weak_nonlinearity();
        let (_, table, c0) = prepare(&InitialState::Coherent(Complex::new(1.0, 0.0)), &p, 1e-12).unwrap();
        let g = to_fock_grid(&evolve(&c0, &table, 0.0), &table);
        let xi = moment(&g, QuadratureSpec::new(QuadratureKind::Xi, 1).unwrap()).unwrap();
        assert!((xi - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        assert!((std_dev_xi(&g).unwrap() - 0.5).abs() < 1e-10);
        assert!((mean_photon(&g, Mode::Field) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_unsupported_orders() {
        assert!(QuadratureSpec::new(QuadratureKind::Xi, 5).is_err());
        assert!(QuadratureSpec::new(QuadratureKind::Xi, 0).is_err());
        assert!(HigherQuadratureSpec::new(HigherQuadrature::Z2, 4).is_err());
    }

    #[test]
    fn eigenbasis_elements_match_grid_action() {
        let p = ModelParams::<f64>::weak_nonlinearity();
        let table = BlockTable::build(&p, 5).unwrap();
        let eigen_grid = |nt: usize, s: usize| {
            FockGrid::from_fn(5, |f, n| if f + n == nt { Complex::new(table.block(nt).d(n, s), 0.0) } else { czero() })
        };
        for mode in [Mode::Field, Mode::Atom] {
            for nt in 0..=5 {
                for ntp in 0..=5 {
                    for s in 0..=nt {
                        for sp in 0..=ntp {
                            let brute = eigen_grid(nt, s).inner(&annihilate(&eigen_grid(ntp, sp), mode));
                            let formula = eigenbasis_ladder_element(&table, mode, (nt, s), (ntp, sp));
                            assert!((brute.re - formula).abs() < 1e-12 && brute.im == 0.0);
                            if nt + 1 != ntp {
                                assert_eq!(formula, 0.0);
                            }
                        }
                    }
                }
            }
        }
    }
}
