//! CSV rendering of an original/optimized sweep pair.
//!
//! Lines starting with `#` carry run metadata; the rest is a standard CSV
//! table with a header row. Numbers use 17 significant digits.

use std::io::Write;

use crate::error::{Error, Result};
use crate::scenario::SweepSeries;

pub const HEADER: [&str; 6] = [
    "p_x",
    "throughput_bps_original",
    "throughput_bps_optimized",
    "ee_original",
    "ee_optimized",
    "improvement_pct",
];

fn num(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Writes metadata comments and one row per grid point.
///
/// `improvement_pct` is the throughput improvement; it is `NaN` where the
/// optimized throughput is zero.
pub fn write_sweep_csv<W: Write>(out: W, original: &SweepSeries<f64>, optimized: &SweepSeries<f64>) -> Result<()> {
    if original.points.len() != optimized.points.len() {
        return Err(Error::domain("original and optimized sweeps have different grids"));
    }
    let io = |e: std::io::Error| Error::domain(format!("write failed: {e}"));
    let mut out = out;
    let meta = &optimized.meta;
    writeln!(out, "# scenario: {}", meta.scenario).map_err(io)?;
    writeln!(out, "# scenario_hash: {}", meta.scenario_hash).map_err(io)?;
    writeln!(out, "# unit_mode: {}", meta.unit_mode).map_err(io)?;
    writeln!(out, "# state: {}", optimized.state).map_err(io)?;
    writeln!(out, "# device: {}", optimized.device).map_err(io)?;
    writeln!(out, "# coupling: {}", meta.coupling).map_err(io)?;
    writeln!(out, "# infeasible_pairs: {}", meta.infeasible_pairs.len()).map_err(io)?;
    writeln!(out, "# omega_defaulted: {}", meta.omega_defaulted).map_err(io)?;
    writeln!(out, "# sensed_state: {}", meta.sensed_state).map_err(io)?;
    for w in &meta.warnings {
        let text = serde_json::to_string(w).map_err(|e| Error::domain(e.to_string()))?;
        writeln!(out, "# warning: {text}").map_err(io)?;
    }

    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::domain(format!("write failed: {e}"));
    w.write_record(HEADER).map_err(csv_err)?;
    for (a, b) in original.points.iter().zip(&optimized.points) {
        let (sa, sb) = (a.mean.throughput_bps, b.mean.throughput_bps);
        let improvement = if sb == 0.0 { f64::NAN } else { 100.0 * (sb - sa) / sb };
        w.write_record([
            num(a.p_x),
            num(sa),
            num(sb),
            num(a.mean.ee_bps_per_watt),
            num(b.mean.ee_bps_per_watt),
            num(improvement),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io)?;
    Ok(())
}
