//! Analysis report structure and its JSON/CSV renderings.

use serde::Serialize;
use uq_core::{Diagnostics, Interval};

#[derive(Debug, Serialize)]
pub struct AnalysisRecord {
    pub method: String,
    pub level: f64,
    /// Plug-in point estimate of the method's target (null when undefined).
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
    pub diagnostics: Diagnostics,
}

impl AnalysisRecord {
    pub fn from_interval(interval: &Interval, estimate: f64) -> Self {
        Self {
            method: interval.method.to_string(),
            level: interval.level,
            estimate,
            lower: interval.lower,
            upper: interval.upper,
            width: interval.width(),
            diagnostics: interval.diagnostics,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub subcommand: &'static str,
    pub inputs: Vec<String>,
    pub levels: Vec<f64>,
    pub seed: u64,
    pub records: Vec<AnalysisRecord>,
    /// Posterior P(θ_A > θ_B); compare and paired subcommands only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prob_a_beats_b: Option<f64>,
}

impl AnalysisReport {
    pub fn new(subcommand: &'static str, inputs: Vec<String>, levels: Vec<f64>, seed: u64) -> Self {
        Self {
            schema: "uq-analysis-report/v1",
            subcommand,
            inputs,
            levels,
            seed,
            records: Vec::new(),
            prob_a_beats_b: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_csv(&self) -> String {
        fn opt_num(v: f64) -> String {
            if v.is_nan() {
                "nan".into()
            } else if v == f64::INFINITY {
                "inf".into()
            } else if v == f64::NEG_INFINITY {
                "-inf".into()
            } else {
                format!("{v:.6}")
            }
        }
        let mut out = String::from(
            "method,level,estimate,lower,upper,width,zero_width,out_of_unit_range,clamped,unbounded,variance_clamped,ess,draws,excluded_draws\n",
        );
        for r in &self.records {
            let d = &r.diagnostics;
            out.push_str(&format!(
                "{},{:.6},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.method,
                r.level,
                opt_num(r.estimate),
                opt_num(r.lower),
                opt_num(r.upper),
                opt_num(r.width),
                d.zero_width,
                d.out_of_unit_range,
                d.clamped,
                d.unbounded,
                d.variance_clamped,
                d.ess.map(|e| format!("{e:.2}")).unwrap_or_default(),
                d.draws.map(|k| k.to_string()).unwrap_or_default(),
                d.excluded_draws.map(|k| k.to_string()).unwrap_or_default(),
            ));
        }
        if let Some(p) = self.prob_a_beats_b {
            out.push_str(&format!("prob-a-beats-b,,{},,,,,,,,,,,\n", opt_num(p)));
        }
        out
    }
}
