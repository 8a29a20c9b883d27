//! Argument parsing and dispatch for the `revival` binary.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use revival::selftest::run_selftest;

use crate::output::write_sweep;
use crate::{run, sweep, Axis, CliError, CliResult, RunConfig, SweepConfig};

#[derive(Parser)]
#[command(name = "revival", version, about = "Exact revival and entanglement dynamics of a field mode coupled to an anharmonic medium")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Sample one configuration and write timeseries.csv and report.json
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides out_dir)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of time samples (overrides n_samples)
        #[arg(long)]
        samples: Option<usize>,
        /// End of the sampled span (overrides t_max)
        #[arg(long)]
        tmax: Option<f64>,
    },
    /// Revival fidelity over a list of values of one parameter
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        axis: Axis,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        values: Vec<f64>,
        /// Output directory (overrides out_dir); the table goes to sweep.csv
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the fast paths against dense oracles on small spaces
    Selftest,
}

pub fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::Run { config, out, samples, tmax } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(out) = out {
                cfg.out_dir = out;
            }
            if let Some(n) = samples {
                cfg.n_samples = n;
            }
            if let Some(t) = tmax {
                cfg.t_max = Some(t);
            }
            let outcome = run(&cfg)?;
            let r = &outcome.report;
            println!("N_max = {}, {} samples over [0, {}]", r.config.n_max, outcome.rows.len(), r.config.t_max);
            if let Some(rev) = &r.revival {
                println!("revival: t_peak = {:.6}, fidelity = {:.6}", rev.t_peak, rev.fidelity);
            }
            println!("wrote {}", cfg.out_dir.display());
        }
        Command::Sweep { config, axis, values, out } => {
            let mut base = RunConfig::load(&config)?;
            if let Some(out) = out {
                base.out_dir = out;
            }
            let path = base.out_dir.join("sweep.csv");
            let rows = sweep(&SweepConfig { base, axis, values })?;
            for r in &rows {
                println!("{} = {}: fidelity {:.6} at t = {:.6}", axis.name(), r.value, r.report.fidelity, r.report.t_peak);
            }
            write_sweep(&path, axis, &rows)?;
            println!("wrote {}", path.display());
        }
        Command::Selftest => {
            let checks = run_selftest()?;
            let mut failed = 0;
            for c in &checks {
                let verdict = if c.passed() { "ok" } else { "FAILED" };
                println!("{:<38} {:>10.3e} (tol {:.0e})  {verdict}", c.name, c.deviation, c.tolerance);
                failed += usize::from(!c.passed());
            }
            if failed > 0 {
                return Err(CliError::Numerical(revival::Error::InvalidInput(format!(
                    "{failed} self-test check(s) failed"
                ))));
            }
            println!("all {} checks passed", checks.len());
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 on success, 1 for usage or configuration errors and
/// 2 for numerical failures.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            return 1;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
