//! Estimate reports: one JSON document per scenario run, plus CSV tables
//! for the per-sample rows and any series meant for external plotting.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{EstimateId, ScenarioConfig};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRow {
    pub index: usize,
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesRow {
    pub series: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateReport {
    pub estimate: EstimateId,
    pub description: String,
    pub scenario: ScenarioConfig,
    pub fp_norm: Option<f64>,
    pub samples: Vec<SampleRow>,
    pub max_ratio: f64,
    pub median_ratio: f64,
    /// Free-form location of the maximizer (window, spectral point, ...).
    pub argmax: Option<String>,
    pub series: Vec<SeriesRow>,
    pub ratio_cap: f64,
    pub pass: bool,
    pub timing_ms: u64,
}

impl EstimateReport {
    pub fn build(
        scenario: &ScenarioConfig,
        fp_norm: Option<f64>,
        samples: Vec<SampleRow>,
        argmax: Option<String>,
        series: Vec<SeriesRow>,
        timing_ms: u64,
    ) -> Self {
        let mut ratios: Vec<f64> = samples.iter().map(|s| s.ratio).collect();
        ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let max_ratio = ratios.last().copied().unwrap_or(0.0);
        let median_ratio = if ratios.is_empty() {
            0.0
        } else {
            ratios[ratios.len() / 2]
        };
        let pass = max_ratio.is_finite() && max_ratio <= scenario.ratio_cap;
        Self {
            estimate: scenario.estimate,
            description: scenario.estimate.description().to_string(),
            scenario: scenario.clone(),
            fp_norm,
            samples,
            max_ratio,
            median_ratio,
            argmax,
            series,
            ratio_cap: scenario.ratio_cap,
            pass,
            timing_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_files(&self, out_dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(out_dir)?;
        fs::write(out_dir.join("report.json"), self.to_json())?;

        let mut samples = fs::File::create(out_dir.join("samples.csv"))?;
        writeln!(samples, "index,label,lhs,rhs,ratio")?;
        for s in &self.samples {
            writeln!(
                samples,
                "{},{},{},{},{}",
                s.index, s.label, s.lhs, s.rhs, s.ratio
            )?;
        }

        let mut series = fs::File::create(out_dir.join("series.csv"))?;
        writeln!(series, "series,x,y")?;
        for s in &self.series {
            writeln!(series, "{},{},{}", s.series, s.x, s.y)?;
        }
        Ok(())
    }

    /// Human-readable rendering for the `report` subcommand.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("estimate:    {:?}\n", self.estimate));
        out.push_str(&format!("checks:      {}\n", self.description));
        if let Some(fp) = self.fp_norm {
            out.push_str(&format!("fp_norm:     {fp:.6}\n"));
        }
        out.push_str(&format!(
            "ratios:      max {:.6}, median {:.6}, cap {:.6}\n",
            self.max_ratio, self.median_ratio, self.ratio_cap
        ));
        if let Some(a) = &self.argmax {
            out.push_str(&format!("argmax:      {a}\n"));
        }
        out.push_str(&format!("samples:     {}\n", self.samples.len()));
        out.push_str(&format!(
            "verdict:     {}\n",
            if self.pass { "pass" } else { "FAIL" }
        ));
        out.push_str(&format!("timing:      {} ms\n", self.timing_ms));
        out.push('\n');
        out.push_str("index  label                            lhs            rhs          ratio\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{:<6} {:<30} {:>13.6e} {:>13.6e} {:>13.6e}\n",
                s.index, s.label, s.lhs, s.rhs, s.ratio
            ));
        }
        out
    }
}

/// Compare two report JSON values, ignoring wall-clock fields.
pub fn reports_equal_modulo_timing(a: &Value, b: &Value) -> bool {
    let mut a = a.clone();
    let mut b = b.clone();
    strip_timing(&mut a);
    strip_timing(&mut b);
    a == b
}

fn strip_timing(v: &mut Value) {
    if let Value::Object(map) = v {
        map.remove("timing_ms");
        for (_, child) in map.iter_mut() {
            strip_timing(child);
        }
    } else if let Value::Array(items) = v {
        for child in items {
            strip_timing(child);
        }
    }
}
