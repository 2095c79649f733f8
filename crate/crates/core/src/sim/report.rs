//! Coverage-experiment results and their CSV/JSON emission.

use serde::Serialize;

use crate::error::{Error, Result};

/// One (method, N, level) cell of a coverage experiment.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageRow {
    pub method: String,
    pub setting: String,
    pub n: u32,
    pub level: f64,
    /// Fraction of replicates whose interval contained the true target.
    pub coverage: f64,
    /// Mean width over finite-width intervals (NaN → null when none).
    pub mean_width: f64,
    /// Width quartiles (q25, q50, q75) over finite widths, from a
    /// log-spaced histogram with ~4.7% relative resolution.
    pub width_quantiles: [f64; 3],
    /// Intervals flagged zero-width, outside [0, 1], infinite, or failed.
    pub invalid_count: u64,
    /// Replicates contributing to this cell.
    pub reps: u64,
}

/// Mean absolute distance from nominal coverage for one (method, N).
#[derive(Debug, Clone, Serialize)]
pub struct CoverageErrorRow {
    pub method: String,
    pub n: u32,
    pub coverage_error: f64,
}

/// Aggregated results of one coverage experiment.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub schema: String,
    pub setting: String,
    pub master_seed: u64,
    pub rows: Vec<CoverageRow>,
    pub coverage_error: Vec<CoverageErrorRow>,
}

impl CoverageReport {
    /// CSV with the fixed header
    /// `method,setting,N,level,coverage,mean_width,invalid_count,reps`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,setting,N,level,coverage,mean_width,invalid_count,reps\n");
        for row in &self.rows {
            let mean_width =
                if row.mean_width.is_nan() { "nan".to_string() } else { format!("{:.6}", row.mean_width) };
            out.push_str(&format!(
                "{},{},{},{:.6},{:.6},{},{},{}\n",
                row.method, row.setting, row.n, row.level, row.coverage, mean_width, row.invalid_count, row.reps
            ));
        }
        out
    }

    /// Pretty-printed JSON mirroring the CSV rows plus the per-(method, N)
    /// coverage errors. Non-finite numbers serialize as null.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Plain-text summary: coverage error per method × N.
    pub fn summary_table(&self) -> String {
        let mut methods: Vec<&str> = Vec::new();
        let mut sizes: Vec<u32> = Vec::new();
        for row in &self.coverage_error {
            if !methods.contains(&row.method.as_str()) {
                methods.push(&row.method);
            }
            if !sizes.contains(&row.n) {
                sizes.push(row.n);
            }
        }
        let mut out = format!("coverage error ({} setting)\n", self.setting);
        out.push_str(&format!("{:<16}", "method"));
        for &n in &sizes {
            out.push_str(&format!("{:>10}", format!("N={n}")));
        }
        out.push('\n');
        for method in methods {
            out.push_str(&format!("{method:<16}"));
            for &n in &sizes {
                let value = self
                    .coverage_error
                    .iter()
                    .find(|r| r.method == method && r.n == n)
                    .map(|r| format!("{:.4}", r.coverage_error))
                    .unwrap_or_else(|| "-".into());
                out.push_str(&format!("{value:>10}"));
            }
            out.push('\n');
        }
        out
    }

    /// Coverage in one cell, for tests and downstream assertions.
    pub fn coverage_at(&self, method: &str, n: u32, level: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.n == n && (r.level - level).abs() < 1e-9)
            .map(|r| r.coverage)
    }

    /// Coverage error for one (method, N).
    pub fn coverage_error_at(&self, method: &str, n: u32) -> Option<f64> {
        self.coverage_error
            .iter()
            .find(|r| r.method == method && r.n == n)
            .map(|r| r.coverage_error)
    }
}

/// Mean absolute distance between empirical coverages and nominal levels.
pub fn coverage_error(coverages: &[f64], levels: &[f64]) -> Result<f64> {
    if coverages.len() != levels.len() {
        return Err(Error::LengthMismatch(format!(
            "{} coverages vs {} levels",
            coverages.len(),
            levels.len()
        )));
    }
    if coverages.is_empty() {
        return Err(Error::EmptyData("coverage error needs at least one level"));
    }
    let total: f64 = coverages.iter().zip(levels).map(|(&c, &l)| (c - l).abs()).sum();
    Ok(total / coverages.len() as f64)
}
