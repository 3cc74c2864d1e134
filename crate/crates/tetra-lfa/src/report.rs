//! Result-file formats: every emitted artifact embeds the manifest that
//! produced it so runs can be reproduced from the file alone.

use crate::analysis::FactorReport;
use crate::solver::{Comparison, CycleRecord};
use crate::{Error, Result};
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub geometry: String,
    pub smoother: String,
    pub omega: Vec<f64>,
    pub nu: (u32, u32),
    pub resolution: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Unix timestamp (seconds).
    pub timestamp: u64,
}

impl RunManifest {
    pub fn stamp_now(mut self) -> Self {
        self.timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self
    }
}

/// FactorReport JSON: {factor, argmax, used, excluded, per_sweep, config}.
#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    pub factor: f64,
    pub argmax: [f64; 3],
    pub used: usize,
    pub excluded: usize,
    pub per_sweep: bool,
    pub config: RunManifest,
}

impl ReportFile {
    pub fn new(report: &FactorReport, manifest: RunManifest) -> Self {
        ReportFile {
            factor: report.factor,
            argmax: report.argmax_frequency,
            used: report.samples_used,
            excluded: report.samples_excluded,
            per_sweep: report.per_sweep,
            config: manifest,
        }
    }
}

/// Solver summary JSON: {predicted_rho, measured_rho, gap, config}.
#[derive(Debug, Clone, Serialize)]
pub struct SolveSummary {
    pub predicted_rho: f64,
    pub measured_rho: f64,
    pub gap: f64,
    pub config: RunManifest,
}

impl SolveSummary {
    pub fn new(cmp: &Comparison, manifest: RunManifest) -> Self {
        SolveSummary {
            predicted_rho: cmp.predicted_rho,
            measured_rho: cmp.measured_rho,
            gap: cmp.gap,
            config: manifest,
        }
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let s = to_json_string(value)?;
    std::fs::write(path, s + "\n")
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

/// Run log CSV: "cycle,error_l2,rate".
pub fn run_log_csv(records: &[CycleRecord]) -> String {
    let mut out = String::from("cycle,error_l2,rate\n");
    for r in records {
        out.push_str(&format!("{},{:.12e},{:.8}\n", r.cycle, r.error_l2, r.rate));
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}
