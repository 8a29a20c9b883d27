//! Revival phenomenology: predicted revival times, overlap-fidelity peaks,
//! fractional-revival entropy dips and squeezing intervals.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::OverlapSpectrum;
use crate::model::{BlockTable, ModelParams};
use crate::states::{prepare, EigenbasisCoefficients, InitialState, DEFAULT_EPS_TRUNC};
use crate::scalar::Real;

/// Default half-width of the revival search window, relative to `t_est`.
pub const DEFAULT_WINDOW_FRAC: f64 = 0.2;
/// Half-width of a dip search window, relative to the fractional time.
pub const DIP_WINDOW_FRAC: f64 = 0.05;
/// Coarse overlap samples per unit of `g t`; fine enough to land in the
/// right lobe of the fast coupling oscillation before refinement.
pub const SCAN_DENSITY: f64 = 40.0;
pub const MIN_SCAN_POINTS: usize = 64;

/// Near-revival time: `2π/γ` for a number state, `4π/γ` otherwise.
pub fn predict_revival_time<T: Real>(state: &InitialState<T>, p: &ModelParams<T>) -> Result<T> {
    if p.gamma <= T::zero() {
        return Err(Error::NoRevival);
    }
    let k = match state {
        InitialState::Fock(_) => T::TAU(),
        InitialState::Coherent(_) | InitialState::PhotonAdded { .. } => T::lit(2.0) * T::TAU(),
    };
    Ok(k / p.gamma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevivalReport<T> {
    pub t_est: T,
    pub t_peak: T,
    pub fidelity: T,
    pub window: (T, T),
}

/// Number of coarse points that gives [`SCAN_DENSITY`] samples per unit `g t`.
pub fn scan_points<T: Real>(g: T, t_est: T, window_frac: T) -> usize {
    let width = (T::lit(2.0) * window_frac * t_est * g).as_f64();
    MIN_SCAN_POINTS.max((SCAN_DENSITY * width).ceil() as usize)
}

/// Locates the overlap maximum within `t_est (1 ± window_frac)`: a coarse
/// scan at `grid` points, then golden-section refinement on the bracket
/// around the best sample down to `1e-4/g`.
pub fn overlap_fidelity<T: Real>(
    c0: &EigenbasisCoefficients<T>,
    table: &BlockTable<T>,
    t_est: T,
    window_frac: T,
    grid: usize,
) -> Result<RevivalReport<T>> {
    if !(window_frac > T::zero() && window_frac <= T::lit(0.5)) {
        return Err(Error::InvalidInput(format!("window fraction {window_frac} outside (0, 0.5]")));
    }
    if grid < MIN_SCAN_POINTS {
        return Err(Error::InvalidInput(format!("scan grid {grid} below {MIN_SCAN_POINTS}")));
    }
    if !(t_est > T::zero() && t_est.is_finite()) {
        return Err(Error::InvalidInput(format!("revival estimate {t_est} must be positive")));
    }
    let spectrum = OverlapSpectrum::new(c0, table);
    let lo = t_est * (T::one() - window_frac);
    let hi = t_est * (T::one() + window_frac);
    let ts = linspace(lo, hi, grid);
    let values: Vec<T> = ts.par_iter().map(|&t| spectrum.overlap(t)).collect();
    let best = argmax(&values);
    let a = ts[best.saturating_sub(1)];
    let b = ts[(best + 1).min(grid - 1)];
    let g = table.params().g;
    let resolution = if g > T::zero() { T::lit(1e-4) / g } else { T::lit(1e-4) * t_est };
    let (t_ref, f_ref) = golden_max(|t| spectrum.overlap(t), a, b, resolution);
    let (t_peak, fidelity) = if f_ref >= values[best] { (t_ref, f_ref) } else { (ts[best], values[best]) };
    Ok(RevivalReport { t_est, t_peak, fidelity, window: (lo, hi) })
}

fn argmax<T: Real>(v: &[T]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
fn golden_max<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T, tol: T) -> (T, T) {
    let r = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    // bounded: the bracket shrinks by r per step
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Revival report for one initial state and parameter set, with the scan
/// density chosen from `g`.
pub fn revival_report<T: Real>(state: &InitialState<T>, params: &ModelParams<T>, window_frac: T, eps: T) -> Result<RevivalReport<T>> {
    let t_est = predict_revival_time(state, params)?;
    let (_, table, c0) = prepare(state, params, eps)?;
    overlap_fidelity(&c0, &table, t_est, window_frac, scan_points(params.g, t_est, window_frac))
}

/// Overlap fidelity at the first near-revival for each coupling in
/// `g_values`, with `ω, ω₀, γ` taken from `base`. Tables are rebuilt per `g`
/// and the points run in parallel.
pub fn fidelity_vs_g<T: Real>(
    state: &InitialState<T>,
    base: &ModelParams<T>,
    g_values: &[T],
) -> Result<Vec<(T, RevivalReport<T>)>> {
    if g_values.is_empty() {
        return Err(Error::InvalidInput("no coupling values given".into()));
    }
    if g_values.iter().any(|&g| !(g > T::zero() && g.is_finite())) {
        return Err(Error::InvalidInput("coupling values must be positive".into()));
    }
    if g_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("coupling values must be ascending".into()));
    }
    let window = T::lit(DEFAULT_WINDOW_FRAC);
    let eps = T::lit(DEFAULT_EPS_TRUNC);
    g_values
        .par_iter()
        .map(|&g| {
            let p = ModelParams::new(base.omega, base.omega0, base.gamma, g)?;
            Ok((g, revival_report(state, &p, window, eps)?))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RevivalFraction {
    Quarter,
    Third,
    Half,
    TwoThirds,
    Full,
}

impl RevivalFraction {
    pub const ALL: [RevivalFraction; 5] = [Self::Quarter, Self::Third, Self::Half, Self::TwoThirds, Self::Full];

    pub fn value(self) -> f64 {
        match self {
            Self::Quarter => 0.25,
            Self::Third => 1.0 / 3.0,
            Self::Half => 0.5,
            Self::TwoThirds => 2.0 / 3.0,
            Self::Full => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Quarter => "1/4",
            Self::Third => "1/3",
            Self::Half => "1/2",
            Self::TwoThirds => "2/3",
            Self::Full => "1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipReport<T> {
    pub fraction: RevivalFraction,
    pub t_min: T,
    pub entropy_min: T,
    /// Median entropy over the whole series.
    pub baseline: T,
}

/// Entropy minimum within `±5%` of each `fraction · t_rev`, reported against
/// the median of the full series.
pub fn entropy_dips<T: Real>(
    times: &[T],
    entropy: &[T],
    t_rev: T,
    fractions: &[RevivalFraction],
) -> Result<Vec<DipReport<T>>> {
    check_series(times, entropy)?;
    let baseline = median(entropy);
    fractions
        .iter()
        .map(|&fraction| {
            let centre = T::lit(fraction.value()) * t_rev;
            let half = T::lit(DIP_WINDOW_FRAC) * centre;
            let (t_min, entropy_min) = window_min(times, entropy, centre - half, centre + half)?;
            Ok(DipReport { fraction, t_min, entropy_min, baseline })
        })
        .collect()
}

fn check_series<T: Real>(times: &[T], values: &[T]) -> Result<()> {
    if times.len() != values.len() || times.is_empty() {
        return Err(Error::InvalidInput("series must be nonempty with matching lengths".into()));
    }
    Ok(())
}

/// Smallest value (and its time) among samples with `lo <= t <= hi`.
/// Fails when the window is not covered by the series.
pub fn window_min<T: Real>(times: &[T], values: &[T], lo: T, hi: T) -> Result<(T, T)> {
    check_series(times, values)?;
    if lo < times[0] || hi > times[times.len() - 1] {
        return Err(Error::WindowOutOfRange { lo: lo.as_f64(), hi: hi.as_f64() });
    }
    times
        .iter()
        .zip(values)
        .filter(|(&t, _)| t >= lo && t <= hi)
        .fold(None, |best: Option<(T, T)>, (&t, &v)| match best {
            Some((_, bv)) if bv <= v => best,
            _ => Some((t, v)),
        })
        .ok_or(Error::WindowOutOfRange { lo: lo.as_f64(), hi: hi.as_f64() })
}

/// Median of the samples with `lo <= t <= hi`.
pub fn window_median<T: Real>(times: &[T], values: &[T], lo: T, hi: T) -> Result<T> {
    check_series(times, values)?;
    let inside: Vec<T> = times.iter().zip(values).filter(|(&t, _)| t >= lo && t <= hi).map(|(_, &v)| v).collect();
    if inside.is_empty() {
        return Err(Error::WindowOutOfRange { lo: lo.as_f64(), hi: hi.as_f64() });
    }
    Ok(median(&inside))
}

/// Maximal runs of consecutive samples with `value < threshold`, as
/// `(first time, last time)` of each run.
pub fn squeezing_intervals<T: Real>(times: &[T], values: &[T], threshold: T) -> Vec<(T, T)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, &v) in values.iter().enumerate().take(times.len()) {
        match (v < threshold, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((times[s], times[i - 1]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((times[s], times[values.len().min(times.len()) - 1]));
    }
    out
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / T::from_index(n - 1);
            (0..n).map(|i| if i == n - 1 { b } else { a + step * T::from_index(i) }).collect()
        }
    }
}

/// Median; the mean of the two middle values for even lengths. `NaN` for an
/// empty slice.
pub fn median<T: Real>(v: &[T]) -> T {
    if v.is_empty() {
        return T::nan();
    }
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let k = s.len() / 2;
    if s.len() % 2 == 1 {
        s[k]
    } else {
        (s[k - 1] + s[k]) * T::lit(0.5)
    }
}
