//! Revival fidelity as one parameter varies over a list of values.

use rayon::prelude::*;

use revival::analysis::{revival_report, RevivalReport, DEFAULT_WINDOW_FRAC};

use crate::config::{AlphaConfig, InitialConfig, RunConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Axis {
    /// Coupling strength `g`
    G,
    /// Mean photon number `|α|²` of the coherent seed (phase of α kept)
    Nu,
    /// Number of added photons (0 gives a coherent state)
    M,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::G => "g",
            Axis::Nu => "nu",
            Axis::M => "m",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub axis: Axis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub report: RevivalReport<f64>,
}

fn seed_alpha(initial: InitialConfig, axis: Axis) -> CliResult<(AlphaConfig, usize)> {
    match initial {
        InitialConfig::Coherent { alpha } => Ok((alpha, 0)),
        InitialConfig::PhotonAdded { alpha, m } => Ok((alpha, m)),
        InitialConfig::Fock { .. } => {
            Err(CliError::Config(format!("axis {} needs a coherent or photon-added initial state", axis.name())))
        }
    }
}

fn with_seed(alpha: AlphaConfig, m: usize) -> InitialConfig {
    if m == 0 {
        InitialConfig::Coherent { alpha }
    } else {
        InitialConfig::PhotonAdded { alpha, m }
    }
}

/// The run configuration for one axis value.
pub fn point_config(base: &RunConfig, axis: Axis, value: f64) -> CliResult<RunConfig> {
    let mut c = base.clone();
    match axis {
        Axis::G => {
            if !(value > 0.0 && value.is_finite()) {
                return Err(CliError::Config(format!("g = {value} must be positive")));
            }
            c.params.g = value;
        }
        Axis::Nu => {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(CliError::Config(format!("nu = {value} must be nonnegative")));
            }
            let (alpha, m) = seed_alpha(c.initial, axis)?;
            let norm = alpha.re.hypot(alpha.im);
            let r = value.sqrt();
            let alpha = if norm > 0.0 {
                AlphaConfig { re: alpha.re / norm * r, im: alpha.im / norm * r }
            } else {
                AlphaConfig { re: r, im: 0.0 }
            };
            c.initial = with_seed(alpha, m);
        }
        Axis::M => {
            if !(value >= 0.0 && value.fract() == 0.0 && value <= 1e6) {
                return Err(CliError::Config(format!("m = {value} must be a nonnegative integer")));
            }
            let (alpha, _) = seed_alpha(c.initial, axis)?;
            c.initial = with_seed(alpha, value as usize);
        }
    }
    Ok(c)
}

pub fn sweep(cfg: &SweepConfig) -> CliResult<Vec<SweepRow>> {
    if cfg.values.is_empty() {
        return Err(CliError::Config("sweep needs at least one value".into()));
    }
    let points = cfg
        .values
        .iter()
        .map(|&v| point_config(&cfg.base, cfg.axis, v).map(|c| (v, c)))
        .collect::<CliResult<Vec<_>>>()?;
    for (_, c) in &points {
        if c.params.gamma == 0.0 {
            return Err(CliError::Config("gamma = 0 has no revival to sweep".into()));
        }
        c.resolved_t_max()?;
    }
    points
        .par_iter()
        .map(|(value, c)| {
            let params = c.model_params()?;
            let report = revival_report(&c.initial_state(), &params, DEFAULT_WINDOW_FRAC, c.eps_trunc)?;
            Ok(SweepRow { value: *value, report })
        })
        .collect()
}

