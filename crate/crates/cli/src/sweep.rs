//! Region map over a `(δ₁, δ₂)` grid.

use std::io::Write;

use cvgauss::entanglement::{
    critical_efficiency_for_deltas, degraded_delta_product, region_for_deltas,
};
use cvgauss::Region;
use serde::{Deserialize, Serialize};

use crate::config::SweepConfig;
use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta1: f64,
    pub delta2: f64,
    pub region: Region,
    /// Absent for separable cells.
    pub eta_critical: Option<f64>,
    /// `δ′₁δ′₂ < 1` at each configured efficiency, in order.
    pub detected: Vec<bool>,
}

pub fn sweep_region_map(grid: &SweepConfig) -> CliResult<Vec<SweepRow>> {
    grid.validate()?;
    let mut cells = Vec::new();
    if let (Some(a), Some(b)) = (&grid.delta1, &grid.delta2) {
        for d1 in a.values() {
            for d2 in b.values() {
                cells.push((d1, d2));
            }
        }
    }
    cells.extend(grid.points.iter().map(|p| (p[0], p[1])));
    Ok(cells
        .into_iter()
        .map(|(delta1, delta2)| SweepRow {
            delta1,
            delta2,
            region: region_for_deltas(delta1, delta2),
            eta_critical: critical_efficiency_for_deltas(delta1, delta2).ok(),
            detected: grid
                .etas
                .iter()
                .map(|&eta| degraded_delta_product(delta1, delta2, eta) < 1.0)
                .collect(),
        })
        .collect())
}

pub fn csv_header(etas: &[f64]) -> Vec<String> {
    let mut header: Vec<String> = ["delta1", "delta2", "region", "eta_critical"]
        .map(String::from)
        .to_vec();
    header.extend(etas.iter().map(|eta| format!("detected_eta_{eta}")));
    header
}

pub fn write_csv<W: Write>(rows: &[SweepRow], etas: &[f64], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(etas))?;
    for r in rows {
        let mut record = vec![
            r.delta1.to_string(),
            r.delta2.to_string(),
            r.region.as_str().to_string(),
            r.eta_critical.map(|e| e.to_string()).unwrap_or_default(),
        ];
        record.extend(r.detected.iter().map(|d| d.to_string()));
        w.write_record(record)?;
    }
    w.flush()?;
    Ok(())
}
