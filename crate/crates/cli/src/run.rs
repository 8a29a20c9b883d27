//! One run: sample the configured span, then summarize revivals, dips and
//! squeezing into a report.

use rayon::prelude::*;
use serde::Serialize;

use revival::analysis::{
    entropy_dips, linspace, predict_revival_time, revival_report, squeezing_intervals, RevivalFraction,
    RevivalReport, DEFAULT_WINDOW_FRAC,
};
use revival::entanglement::{entropy_sample, ENTROPY_TOLERANCE};
use revival::evolution::{evolve, to_fock_grid, OverlapSpectrum};
use revival::model::BlockTable;
use revival::observables::{
    higher_quadrature_variance, mean_photon, HigherQuadrature, HigherQuadratureSpec, Mode, QuadratureKind,
    QuadratureMoments, SqueezingReport, SQUEEZE_MARGIN,
};
use revival::states::{prepare, EigenbasisCoefficients};
use revival::{Error, Result};

use crate::config::{InitialConfig, Output, ParamsConfig, RunConfig};
use crate::error::CliResult;

/// Coherent-state value of `Δξ`; smaller values count as squeezed.
pub const XI_THRESHOLD: f64 = 0.5;
/// Power of the ladder operators in the higher-order quadratures reported.
pub const HIGHER_ORDER_Q: usize = 2;

/// One line of `timeseries.csv`; `None` marks a quantity that was not requested.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Row {
    pub t: f64,
    pub gt: f64,
    pub svne: Option<f64>,
    pub sle: Option<f64>,
    pub overlap: Option<f64>,
    pub mean_n_field: Option<f64>,
    pub mean_n_atom: Option<f64>,
    pub mean_xi: Option<f64>,
    pub mean_eta: Option<f64>,
    pub var_xi: Option<f64>,
    pub var_eta: Option<f64>,
    pub skew_xi: Option<f64>,
    pub kurt_xi: Option<f64>,
}

pub const CSV_COLUMNS: [&str; 13] = [
    "t", "gt", "svne", "sle", "overlap", "mean_n_field", "mean_n_atom", "mean_xi", "mean_eta", "var_xi", "var_eta",
    "skew_xi", "kurt_xi",
];

impl Row {
    pub fn fields(&self) -> [Option<f64>; 13] {
        [
            Some(self.t),
            Some(self.gt),
            self.svne,
            self.sle,
            self.overlap,
            self.mean_n_field,
            self.mean_n_atom,
            self.mean_xi,
            self.mean_eta,
            self.var_xi,
            self.var_eta,
            self.skew_xi,
            self.kurt_xi,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub params: ParamsConfig,
    pub initial: InitialConfig,
    pub nu: f64,
    pub t_max: f64,
    pub n_samples: usize,
    pub eps_trunc: f64,
    pub n_max: usize,
    pub tail_weight: f64,
    pub outputs: Vec<Output>,
    pub out_dir: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RevivalSummary {
    pub t_est: f64,
    pub t_peak: f64,
    pub fidelity: f64,
    pub window: [f64; 2],
}

impl From<RevivalReport<f64>> for RevivalSummary {
    fn from(r: RevivalReport<f64>) -> Self {
        Self { t_est: r.t_est, t_peak: r.t_peak, fidelity: r.fidelity, window: [r.window.0, r.window.1] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DipSummary {
    pub fraction: &'static str,
    pub t_min: f64,
    pub entropy_min: f64,
    pub baseline: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeSummary {
    pub variance: f64,
    pub threshold: f64,
    pub squeezed: bool,
}

impl From<SqueezingReport<f64>> for SqueezeSummary {
    fn from(r: SqueezingReport<f64>) -> Self {
        Self { variance: r.variance, threshold: r.threshold, squeezed: r.squeezed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HigherOrderSummary {
    pub t: f64,
    pub q: usize,
    pub z1: SqueezeSummary,
    pub z2: SqueezeSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Diagnostics {
    pub max_norm_deviation: f64,
    pub max_entropy_asymmetry: Option<f64>,
    /// Smallest `svne - sle` over the run; never below zero up to round-off.
    pub min_svne_minus_sle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: ResolvedConfig,
    pub revival: Option<RevivalSummary>,
    pub dips: Vec<DipSummary>,
    pub squeezing_intervals: Vec<[f64; 2]>,
    pub higher_order_squeezing: Option<HigherOrderSummary>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub rows: Vec<Row>,
    pub report: Report,
}

struct Sample {
    row: Row,
    norm_dev: f64,
    asym: Option<f64>,
}

fn sample(
    config: &RunConfig,
    c0: &EigenbasisCoefficients<f64>,
    table: &BlockTable<f64>,
    spectrum: &OverlapSpectrum<f64>,
    t: f64,
) -> Result<Sample> {
    let st = evolve(c0, table, t);
    let norm_dev = (st.norm_sqr() - c0.norm_sqr()).abs();
    let mut row = Row { t, gt: table.params().g * t, ..Row::default() };
    let mut asym = None;
    if config.wants(Output::Overlap) {
        row.overlap = Some(spectrum.overlap(t));
    }
    let needs_grid = [Output::Entropy, Output::Photon, Output::Moments, Output::Squeezing].iter().any(|&o| config.wants(o));
    if !needs_grid {
        return Ok(Sample { row, norm_dev, asym });
    }
    let grid = to_fock_grid(&st, table);
    if config.wants(Output::Entropy) {
        let e = entropy_sample(&grid, t)?;
        let d = (e.field.svne - e.atom.svne).abs().max((e.field.sle - e.atom.sle).abs());
        if d > ENTROPY_TOLERANCE {
            return Err(Error::EntropyMismatch(d));
        }
        row.svne = Some(e.field.svne);
        row.sle = Some(e.field.sle);
        asym = Some(d);
    }
    if config.wants(Output::Photon) {
        row.mean_n_field = Some(mean_photon(&grid, Mode::Field));
        row.mean_n_atom = Some(mean_photon(&grid, Mode::Atom));
    }
    if config.wants(Output::Moments) || config.wants(Output::Squeezing) {
        let xi = QuadratureMoments::compute(&grid, QuadratureKind::Xi)?;
        row.var_xi = Some(xi.variance());
        if config.wants(Output::Moments) {
            let eta = QuadratureMoments::compute(&grid, QuadratureKind::Eta)?;
            row.mean_xi = Some(xi.mean());
            row.mean_eta = Some(eta.mean());
            row.var_eta = Some(eta.variance());
            row.skew_xi = Some(xi.skewness());
            row.kurt_xi = Some(xi.kurtosis());
        }
    }
    Ok(Sample { row, norm_dev, asym })
}

/// Runs the configured computation without touching the filesystem.
pub fn simulate(config: &RunConfig) -> CliResult<RunOutcome> {
    let t_max = config.resolved_t_max()?;
    let params = config.model_params()?;
    let state = config.initial_state();
    let (amps, table, c0) = prepare(&state, &params, config.eps_trunc)?;
    let spectrum = OverlapSpectrum::new(&c0, &table);
    let times = linspace(0.0, t_max, config.n_samples);

    let samples = times
        .par_iter()
        .map(|&t| sample(config, &c0, &table, &spectrum, t))
        .collect::<Result<Vec<_>>>()?;

    let mut diagnostics = Diagnostics::default();
    for s in &samples {
        diagnostics.max_norm_deviation = diagnostics.max_norm_deviation.max(s.norm_dev);
        if let Some(a) = s.asym {
            diagnostics.max_entropy_asymmetry = Some(diagnostics.max_entropy_asymmetry.unwrap_or(0.0).max(a));
        }
        if let (Some(v), Some(l)) = (s.row.svne, s.row.sle) {
            let gap = v - l;
            diagnostics.min_svne_minus_sle = Some(diagnostics.min_svne_minus_sle.map_or(gap, |g: f64| g.min(gap)));
        }
    }
    let rows: Vec<Row> = samples.into_iter().map(|s| s.row).collect();

    let t_rev = predict_revival_time(&state, &params).ok();
    let revival = match t_rev {
        Some(_) => Some(revival_report(&state, &params, DEFAULT_WINDOW_FRAC, config.eps_trunc)?.into()),
        None => None,
    };

    let mut dips = Vec::new();
    if let (Some(t_rev), true) = (t_rev, config.wants(Output::Entropy)) {
        let entropy: Vec<f64> = rows.iter().map(|r| r.svne.unwrap_or(0.0)).collect();
        for fraction in RevivalFraction::ALL {
            match entropy_dips(&times, &entropy, t_rev, &[fraction]) {
                Ok(found) => dips.extend(found.into_iter().map(|d| DipSummary {
                    fraction: d.fraction.label(),
                    t_min: d.t_min,
                    entropy_min: d.entropy_min,
                    baseline: d.baseline,
                })),
                Err(Error::WindowOutOfRange { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }

    let mut intervals = Vec::new();
    let mut higher = None;
    if config.wants(Output::Squeezing) {
        let dxi: Vec<f64> = rows.iter().map(|r| r.var_xi.unwrap_or(0.0).sqrt()).collect();
        // number states sit exactly on the coherent value; ignore round-off below it
        let threshold = XI_THRESHOLD * (1.0 - SQUEEZE_MARGIN);
        intervals = squeezing_intervals(&times, &dxi, threshold).into_iter().map(|(a, b)| [a, b]).collect();
        if let Some(t_rev) = t_rev {
            let t = 0.5 * t_rev;
            let grid = to_fock_grid(&evolve(&c0, &table, t), &table);
            let z = |which| -> Result<SqueezeSummary> {
                let spec = HigherQuadratureSpec::new(which, HIGHER_ORDER_Q)?;
                Ok(higher_quadrature_variance(&grid, spec)?.into())
            };
            higher = Some(HigherOrderSummary {
                t,
                q: HIGHER_ORDER_Q,
                z1: z(HigherQuadrature::Z1)?,
                z2: z(HigherQuadrature::Z2)?,
            });
        }
    }

    let resolved = ResolvedConfig {
        params: config.params,
        initial: config.initial,
        nu: state.nu(),
        t_max,
        n_samples: config.n_samples,
        eps_trunc: config.eps_trunc,
        n_max: amps.n_max,
        tail_weight: amps.tail_weight,
        outputs: config.outputs.iter().copied().collect(),
        out_dir: config.out_dir.display().to_string(),
    };
    let report = Report {
        config: resolved,
        revival,
        dips,
        squeezing_intervals: intervals,
        higher_order_squeezing: higher,
        diagnostics,
    };
    Ok(RunOutcome { rows, report })
}

/// [`simulate`] followed by writing `timeseries.csv` and `report.json`.
pub fn run(config: &RunConfig) -> CliResult<RunOutcome> {
    let outcome = simulate(config)?;
    crate::output::write_run(&config.out_dir, &outcome)?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::InitialConfig;
    use revival::analysis::{median, window_min};

    #[test]
    fn number_state_entropy_dips_near_revival() {
        let mut c = RunConfig::new(InitialConfig::Fock { n: 10 });
        c.t_max = Some(2.2 * std::f64::consts::PI);
        c.n_samples = 8000;
        c.outputs = [Output::Entropy].into_iter().collect();
        let out = simulate(&c).unwrap();
        let gt: Vec<f64> = out.rows.iter().map(|r| r.gt).collect();
        let s: Vec<f64> = out.rows.iter().map(|r| r.svne.unwrap()).collect();
        let target = 200.0 * std::f64::consts::PI;
        let (_, dip) = window_min(&gt, &s, 0.95 * target, 1.05 * target).unwrap();
        assert!(dip < 0.1 * median(&s), "{dip}");
        let full = out.report.dips.iter().find(|d| d.fraction == "1").unwrap();
        assert!(full.entropy_min <= full.baseline);
    }

    #[test]
    fn higher_order_report_at_half_revival() {
        let mut c = RunConfig::new(InitialConfig::Fock { n: 10 });
        c.n_samples = 50;
        let out = simulate(&c).unwrap();
        let h = out.report.higher_order_squeezing.unwrap();
        assert!((h.t - std::f64::consts::PI).abs() < 1e-15);
        assert!(!h.z1.squeezed && !h.z2.squeezed);
        assert!(out.report.diagnostics.max_entropy_asymmetry.unwrap() < 1e-8);
    }
}
