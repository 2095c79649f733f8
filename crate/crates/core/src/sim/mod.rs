//! Coverage-experiment harness: generative models for each setting, the
//! parallel simulation engine, and report emission.

pub mod config;
pub mod engine;
pub mod generate;
pub mod methods;
pub mod report;

pub use config::{
    logit_level_grid, DataPrior, DispersionPrior, DrawCounts, DrawnParams, ScalarPrior, Setting,
    SimConfig, SimplexPrior,
};
pub use engine::{run_coverage_experiment, run_coverage_experiment_with_threads};
pub use generate::{gen_clustered, gen_confusion, gen_iid, gen_paired};
pub use methods::{compute_intervals, true_target, Dataset, MethodTag, TargetKind};
pub use report::{coverage_error, CoverageErrorRow, CoverageReport, CoverageRow};
