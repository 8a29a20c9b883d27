//! File writers. Numbers are printed with 17 significant digits so that
//! values round-trip exactly.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::CliResult;
use crate::run::{RunOutcome, CSV_COLUMNS};
use crate::sweep::{Axis, SweepRow};

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_field(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

pub fn write_timeseries(path: &Path, outcome: &RunOutcome) -> CliResult<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", CSV_COLUMNS.join(","))?;
    for row in &outcome.rows {
        let line: Vec<String> = row.fields().into_iter().map(format_field).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<S: serde::Serialize>(path: &Path, value: &S) -> CliResult<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value).map_err(std::io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn write_run(dir: &Path, outcome: &RunOutcome) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    write_timeseries(&dir.join("timeseries.csv"), outcome)?;
    write_json(&dir.join("report.json"), &outcome.report)
}

pub fn write_sweep(path: &Path, axis: Axis, rows: &[SweepRow]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{},fidelity,t_peak,t_est", axis.name())?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{}",
            format_number(r.value),
            format_number(r.report.fidelity),
            format_number(r.report.t_peak),
            format_number(r.report.t_est)
        )?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::format_number;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 1.0 / 3.0, -2.5e-300, std::f64::consts::PI * 1e12, f64::MIN_POSITIVE] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
    }
}
