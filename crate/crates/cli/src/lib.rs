//! Library side of the `revival` command: configuration, run orchestration,
//! sweeps and file output.

pub mod app;
pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod sweep;

pub use config::{InitialConfig, Output, RunConfig};
pub use error::{CliError, CliResult};
pub use run::{run, simulate, Report, Row, RunOutcome};
pub use sweep::{sweep, Axis, SweepConfig, SweepRow};

/// Caps the global worker pool at `REVIVAL_THREADS` when it is set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("REVIVAL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("REVIVAL_THREADS = {raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size worker pool: {e}")))
}
