//! JSON run configuration. Every field except `initial` has a default;
//! command-line flags override file values after loading.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use revival::analysis::predict_revival_time;
use revival::model::ModelParams;
use revival::states::{InitialState, DEFAULT_EPS_TRUNC};
use revival::{Complex, Error};

use crate::error::{CliError, CliResult};

pub const DEFAULT_SAMPLES: usize = 20_000;
/// Default span of a run, as a multiple of the predicted revival time.
pub const DEFAULT_SPAN: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    pub omega: f64,
    pub omega0: f64,
    pub gamma: f64,
    pub g: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self { omega: 1.0, omega0: 1.0, gamma: 1.0, g: 100.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaConfig {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialConfig {
    Fock { n: usize },
    Coherent { alpha: AlphaConfig },
    PhotonAdded { alpha: AlphaConfig, m: usize },
}

impl InitialConfig {
    pub fn to_state(self) -> InitialState<f64> {
        match self {
            InitialConfig::Fock { n } => InitialState::Fock(n),
            InitialConfig::Coherent { alpha } => InitialState::Coherent(Complex::new(alpha.re, alpha.im)),
            InitialConfig::PhotonAdded { alpha, m } => InitialState::photon_added(Complex::new(alpha.re, alpha.im), m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Entropy,
    Overlap,
    Moments,
    Squeezing,
    Photon,
}

impl Output {
    pub const ALL: [Output; 5] = [Output::Entropy, Output::Overlap, Output::Moments, Output::Squeezing, Output::Photon];
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_eps() -> f64 {
    DEFAULT_EPS_TRUNC
}

fn default_outputs() -> BTreeSet<Output> {
    Output::ALL.into_iter().collect()
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub params: ParamsConfig,
    pub initial: InitialConfig,
    /// End of the sampled span; `1.1 T_rev` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    #[serde(default = "default_eps")]
    pub eps_trunc: f64,
    #[serde(default = "default_outputs")]
    pub outputs: BTreeSet<Output>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn new(initial: InitialConfig) -> Self {
        Self {
            params: ParamsConfig::default(),
            initial,
            t_max: None,
            n_samples: DEFAULT_SAMPLES,
            eps_trunc: DEFAULT_EPS_TRUNC,
            outputs: default_outputs(),
            out_dir: default_out_dir(),
        }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn model_params(&self) -> CliResult<ModelParams<f64>> {
        let p = self.params;
        ModelParams::new(p.omega, p.omega0, p.gamma, p.g).map_err(config_error)
    }

    pub fn initial_state(&self) -> InitialState<f64> {
        self.initial.to_state()
    }

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }

    /// Checks the invariants and resolves `t_max`.
    pub fn resolved_t_max(&self) -> CliResult<f64> {
        let params = self.model_params()?;
        if self.n_samples < 2 {
            return Err(CliError::Config(format!("n_samples = {} must be at least 2", self.n_samples)));
        }
        if !(self.eps_trunc > 0.0 && self.eps_trunc <= 1e-6) {
            return Err(CliError::Config(format!("eps_trunc = {:e} outside (0, 1e-6]", self.eps_trunc)));
        }
        if let InitialConfig::Coherent { alpha } | InitialConfig::PhotonAdded { alpha, .. } = self.initial {
            if !(alpha.re.is_finite() && alpha.im.is_finite()) {
                return Err(CliError::Config("alpha must be finite".into()));
            }
        }
        match self.t_max {
            Some(t) if t > 0.0 && t.is_finite() => Ok(t),
            Some(t) => Err(CliError::Config(format!("t_max = {t} must be positive"))),
            None => predict_revival_time(&self.initial_state(), &params)
                .map(|t_rev| DEFAULT_SPAN * t_rev)
                .map_err(|_| CliError::Config("gamma = 0 has no revival time; set t_max".into())),
        }
    }
}

pub(crate) fn config_error(e: Error) -> CliError {
    CliError::Config(e.to_string())
}
