//! Result records for the experiment runners and their CSV/JSON export.
//!
//! CSV is the plot-data interface; JSON mirrors the same fields and adds a
//! `config` object echoing every resolved parameter plus the library
//! version.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Version string embedded in every JSON config echo.
pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output format for [`export`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

/// One Monte-Carlo recovery trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    pub seed: u64,
    pub lambda: f64,
    #[serde(rename = "T")]
    pub step: f64,
    #[serde(rename = "N")]
    pub n_used: usize,
    pub mse_aligned: f64,
    pub success: bool,
    pub runtime_ms: f64,
}

/// Success rates over a (sampling step, difference order) grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub t_values: Vec<f64>,
    pub n_values: Vec<usize>,
    /// `success_rate[i][j]` for `t_values[i]` and `n_values[j]`, in [0, 1].
    pub success_rate: Vec<Vec<f64>>,
    pub trials_per_cell: usize,
}

impl SweepGrid {
    pub fn rate_at(&self, t_index: usize, n_index: usize) -> f64 {
        self.success_rate[t_index][n_index]
    }
}

/// One long-format sweep cell, as exported.
#[derive(Debug, Clone, Serialize)]
pub struct SweepCell {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub success_rate: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoiselessConfig {
    pub trials: usize,
    pub seed: u64,
    pub step: f64,
    /// Fixed folding threshold; `null` means drawn per trial from U[0.01, 0.1].
    pub lambda: Option<f64>,
    /// Fixed amplitude bound; `null` means the smallest multiple of 2*lambda >= 1.
    pub beta_g: Option<f64>,
    /// Forced difference order; `null` selects the order from the bound.
    pub order: Option<usize>,
    pub num_bins: usize,
    pub success_threshold: f64,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoiselessReport {
    pub config: NoiselessConfig,
    pub trials: Vec<TrialReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub trials_per_cell: usize,
    pub seed: u64,
    pub lambda: f64,
    pub beta_g: f64,
    pub num_bins: usize,
    pub success_threshold: f64,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub grid: SweepGrid,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantizationConfig {
    pub seed: u64,
    pub bits: u32,
    pub lambda: f64,
    pub beta_g: f64,
    pub step: f64,
    pub order: usize,
    pub sup_norm: f64,
    pub num_samples: usize,
    pub num_bins: usize,
    pub version: &'static str,
}

/// Quantization experiment outcome: recovery error versus the raw
/// quantization noise, and the error of quantizing saturated samples with
/// the same bit budget.
#[derive(Debug, Clone, Serialize)]
pub struct QuantizationReport {
    pub config: QuantizationConfig,
    /// MSE between recovered and true samples after constant alignment.
    pub mse_recovered: f64,
    /// MSE between quantized and clean modulo samples on the same window.
    pub mse_modulo_noise: f64,
    /// MSE of quantizing clipped non-modulo samples directly.
    pub mse_direct_quantized: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoiseTheoremConfig {
    pub alpha: u32,
    pub trials: usize,
    pub seed: u64,
    pub lambda: f64,
    pub beta_g: f64,
    pub step: f64,
    pub order: usize,
    pub noise_bound: f64,
    pub noise_scale: f64,
    pub tolerance: f64,
    pub version: &'static str,
}

/// One noise-theorem trial: the recovered samples minus truth minus the
/// aligned constant must reproduce the injected noise element-wise.
#[derive(Debug, Clone, Serialize)]
pub struct NoiseTrialReport {
    pub trial: usize,
    pub seed: u64,
    pub max_deviation: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoiseTheoremReport {
    pub config: NoiseTheoremConfig,
    pub trials: Vec<NoiseTrialReport>,
}

impl NoiseTheoremReport {
    pub fn total_violations(&self) -> usize {
        self.trials.iter().map(|t| t.violations).sum()
    }
}

/// Anything the harness can write out as CSV or JSON.
pub trait Report {
    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()>;
    fn to_json(&self) -> serde_json::Value;
}

fn write_records(
    w: &mut dyn Write,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> io::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(header)?;
    for row in rows {
        csv.write_record(&row)?;
    }
    csv.flush()
}

impl Report for NoiselessReport {
    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        write_records(
            w,
            &["trial", "seed", "lambda", "T", "N", "mse_aligned", "success", "runtime_ms"],
            self.trials.iter().map(|t| {
                vec![
                    t.trial.to_string(),
                    t.seed.to_string(),
                    t.lambda.to_string(),
                    t.step.to_string(),
                    t.n_used.to_string(),
                    t.mse_aligned.to_string(),
                    t.success.to_string(),
                    t.runtime_ms.to_string(),
                ]
            }),
        )
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl SweepReport {
    pub fn cells(&self) -> Vec<SweepCell> {
        let mut out = Vec::new();
        for (i, &t) in self.grid.t_values.iter().enumerate() {
            for (j, &n) in self.grid.n_values.iter().enumerate() {
                out.push(SweepCell {
                    t,
                    n,
                    success_rate: self.grid.success_rate[i][j],
                    trials: self.grid.trials_per_cell,
                });
            }
        }
        out
    }
}

impl Report for SweepReport {
    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        write_records(
            w,
            &["T", "N", "success_rate", "trials"],
            self.cells().iter().map(|c| {
                vec![
                    c.t.to_string(),
                    c.n.to_string(),
                    c.success_rate.to_string(),
                    c.trials.to_string(),
                ]
            }),
        )
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "config": self.config,
            "cells": self.cells(),
        })
    }
}

impl Report for QuantizationReport {
    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        write_records(
            w,
            &["mse_recovered", "mse_modulo_noise", "mse_direct_quantized"],
            std::iter::once(vec![
                self.mse_recovered.to_string(),
                self.mse_modulo_noise.to_string(),
                self.mse_direct_quantized.to_string(),
            ]),
        )
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl Report for NoiseTheoremReport {
    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        write_records(
            w,
            &["trial", "seed", "max_deviation", "violations"],
            self.trials.iter().map(|t| {
                vec![
                    t.trial.to_string(),
                    t.seed.to_string(),
                    t.max_deviation.to_string(),
                    t.violations.to_string(),
                ]
            }),
        )
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Serialize a report to a file, or to stdout when `path` is `None`.
pub fn export<R: Report>(report: &R, format: ExportFormat, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|source| Error::Io { path: p.into(), source })?;
            let mut buf = io::BufWriter::new(file);
            write_report(report, format, &mut buf)
                .and_then(|_| buf.flush())
                .map_err(|source| Error::Io { path: p.into(), source })
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_report(report, format, &mut lock)
                .map_err(|source| Error::Io { path: "<stdout>".into(), source })
        }
    }
}

fn write_report<R: Report>(
    report: &R,
    format: ExportFormat,
    w: &mut dyn Write,
) -> io::Result<()> {
    match format {
        ExportFormat::Csv => report.write_csv(w),
        ExportFormat::Json => {
            serde_json::to_writer_pretty(&mut *w, &report.to_json())?;
            writeln!(w)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_config() -> NoiselessConfig {
        NoiselessConfig {
            trials: 0,
            seed: 1,
            step: 0.055,
            lambda: None,
            beta_g: None,
            order: None,
            num_bins: 16,
            success_threshold: 1e-24,
            version: LIBRARY_VERSION,
        }
    }

    #[test]
    fn empty_report_is_header_only_csv() {
        let report = NoiselessReport { config: sample_config(), trials: vec![] };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "trial,seed,lambda,T,N,mse_aligned,success,runtime_ms\n");
    }

    #[test]
    fn trial_csv_column_order_is_pinned() {
        let report = NoiselessReport {
            config: sample_config(),
            trials: vec![TrialReport {
                trial: 0,
                seed: 5,
                lambda: 0.05,
                step: 0.055,
                n_used: 4,
                mse_aligned: 1e-30,
                success: true,
                runtime_ms: 0.25,
            }],
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "trial,seed,lambda,T,N,mse_aligned,success,runtime_ms");
        assert_eq!(lines.next().unwrap(), format!("0,5,0.05,0.055,4,{},true,0.25", 1e-30));
    }

    #[test]
    fn sweep_csv_is_long_format() {
        let report = SweepReport {
            config: SweepConfig {
                trials_per_cell: 2,
                seed: 0,
                lambda: 0.2,
                beta_g: 1.2,
                num_bins: 16,
                success_threshold: 1e-24,
                version: LIBRARY_VERSION,
            },
            grid: SweepGrid {
                t_values: vec![0.01, 0.02],
                n_values: vec![1, 2],
                success_rate: vec![vec![1.0, 1.0], vec![0.5, 0.0]],
                trials_per_cell: 2,
            },
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "T,N,success_rate,trials");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "0.01,1,1,2");
        assert_eq!(lines[4], "0.02,2,0,2");
    }

    #[test]
    fn json_echoes_config_and_version() {
        let report = NoiselessReport {
            config: sample_config(),
            trials: vec![TrialReport {
                trial: 0,
                seed: 5,
                lambda: 0.05,
                step: 0.055,
                n_used: 4,
                mse_aligned: 1e-30,
                success: true,
                runtime_ms: 0.25,
            }],
        };
        let json = report.to_json();
        assert_eq!(json["config"]["version"], LIBRARY_VERSION);
        assert_eq!(json["config"]["num_bins"], 16);
        // JSON mirrors the CSV field names
        assert_eq!(json["trials"][0]["T"], 0.055);
        assert_eq!(json["trials"][0]["N"], 4);
        assert_eq!(json["trials"][0]["mse_aligned"], 1e-30);
    }

    #[test]
    fn json_round_trips_values() {
        let report = NoiselessReport {
            config: sample_config(),
            trials: vec![TrialReport {
                trial: 3,
                seed: 17,
                lambda: 0.0123456789,
                step: 11.0 / 200.0,
                n_used: 7,
                mse_aligned: 3.25e-31,
                success: true,
                runtime_ms: 1.5,
            }],
        };
        let text = serde_json::to_string(&report.to_json()).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["trials"][0]["lambda"].as_f64().unwrap(), 0.0123456789);
        assert_eq!(back["trials"][0]["mse_aligned"].as_f64().unwrap(), 3.25e-31);
        assert_eq!(back["trials"][0]["T"].as_f64().unwrap(), 11.0 / 200.0);
    }

    #[test]
    fn export_writes_file_and_reports_io_failure() {
        let report = NoiselessReport { config: sample_config(), trials: vec![] };
        let dir = std::env::temp_dir().join("usamp-report-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        export(&report, ExportFormat::Csv, Some(&path)).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("trial,seed"));

        let bad = dir.join("no-such-dir").join("out.csv");
        match export(&report, ExportFormat::Csv, Some(&bad)) {
            Err(Error::Io { .. }) => {}
            other => panic!("expected Io error, got {other:?}"),
        }
    }
}
