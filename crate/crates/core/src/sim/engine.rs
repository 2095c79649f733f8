//! The coverage-experiment engine.
//!
//! Work is split into (parameter draw × dataset size) tasks that run in
//! parallel. Determinism under any thread count comes from two rules:
//! every random stream is derived arithmetically from
//! `(setting, draw, size, dataset, method)` indices rather than from
//! worker state, and floating-point accumulators are merged in task-index
//! order after the parallel map (integer counters commute, so the width
//! histogram may be merged as tasks finish).

use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::sim::config::{DrawnParams, Setting, SimConfig};
use crate::sim::generate::{gen_clustered, gen_confusion, gen_iid, gen_paired};
use crate::sim::methods::{compute_intervals, true_target, Dataset};
use crate::sim::report::{coverage_error, CoverageErrorRow, CoverageReport, CoverageRow};
use crate::stats::rng::RngStream;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Width histogram layout: one zero bin, 50 log-spaced bins per decade
/// over [1e-6, 1e12), and a saturation bin. Quantiles read from it have
/// ~4.7% relative resolution, saturating at 1e12.
const HIST_DECADES: usize = 18;
const HIST_PER_DECADE: f64 = 50.0;
const HIST_LOG_BINS: usize = HIST_DECADES * 50;
const HIST_BINS: usize = 1 + HIST_LOG_BINS + 1;
const HIST_MIN_EXP: f64 = -6.0;

fn width_bin(width: f64) -> usize {
    if width == 0.0 {
        return 0;
    }
    let idx = ((width.log10() - HIST_MIN_EXP) * HIST_PER_DECADE).floor();
    if idx < 0.0 {
        1
    } else if idx >= HIST_LOG_BINS as f64 {
        HIST_BINS - 1
    } else {
        1 + idx as usize
    }
}

fn bin_representative(bin: usize) -> f64 {
    if bin == 0 {
        0.0
    } else if bin == HIST_BINS - 1 {
        1e12
    } else {
        10f64.powf((bin as f64 - 0.5) / HIST_PER_DECADE + HIST_MIN_EXP)
    }
}

fn hist_quantile(counts: &[u64], q: f64) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return f64::NAN;
    }
    let target = (q * total as f64).ceil().max(1.0) as u64;
    let mut acc = 0u64;
    for (bin, &c) in counts.iter().enumerate() {
        acc += c;
        if acc >= target {
            return bin_representative(bin);
        }
    }
    bin_representative(HIST_BINS - 1)
}

#[derive(Debug, Clone, Copy, Default)]
struct CellStats {
    covered: u64,
    width_sum: f64,
    finite_widths: u64,
    invalid: u64,
}

impl CellStats {
    fn merge(&mut self, other: &CellStats) {
        self.covered += other.covered;
        self.width_sum += other.width_sum;
        self.finite_widths += other.finite_widths;
        self.invalid += other.invalid;
    }
}

/// Runs the experiment with the thread count from `UQ_THREADS` (or rayon's
/// default). The thread count never affects the results.
pub fn run_coverage_experiment(config: &SimConfig) -> Result<CoverageReport> {
    run_coverage_experiment_with_threads(config, env_threads())
}

fn env_threads() -> Option<usize> {
    std::env::var("UQ_THREADS").ok()?.parse().ok().filter(|&t| t >= 1)
}

/// Runs the experiment on an explicit number of worker threads.
pub fn run_coverage_experiment_with_threads(
    config: &SimConfig,
    threads: Option<usize>,
) -> Result<CoverageReport> {
    config.validate()?;

    let n_methods = config.methods.len();
    let n_sizes = config.sizes.len();
    let n_levels = config.levels.len();
    let n_draws = config.n_param_draws as usize;
    let n_tasks = n_draws * n_sizes;

    let hist = Mutex::new(vec![0u64; n_methods * n_sizes * n_levels * HIST_BINS]);

    let task_results: Vec<Vec<CellStats>> =
        map_tasks(n_tasks, threads, |task| run_task(config, task, &hist))?;

    // Merge per-task float accumulators in task-index order.
    let mut cells = vec![CellStats::default(); n_methods * n_sizes * n_levels];
    for (task, stats) in task_results.iter().enumerate() {
        let si = task % n_sizes;
        for mi in 0..n_methods {
            for li in 0..n_levels {
                cells[(mi * n_sizes + si) * n_levels + li].merge(&stats[mi * n_levels + li]);
            }
        }
    }

    let reps = u64::from(config.n_param_draws) * u64::from(config.n_datasets_per_draw);
    let hist = hist.into_inner().expect("no panics hold the histogram lock");

    let mut rows = Vec::with_capacity(n_methods * n_sizes * n_levels);
    let mut errors = Vec::with_capacity(n_methods * n_sizes);
    for (mi, tag) in config.methods.iter().enumerate() {
        for (si, &n) in config.sizes.iter().enumerate() {
            let mut coverages = Vec::with_capacity(n_levels);
            for (li, &level) in config.levels.iter().enumerate() {
                let cell = &cells[(mi * n_sizes + si) * n_levels + li];
                let coverage = cell.covered as f64 / reps as f64;
                coverages.push(coverage);
                let mean_width = if cell.finite_widths > 0 {
                    cell.width_sum / cell.finite_widths as f64
                } else {
                    f64::NAN
                };
                let hist_cell = &hist[((mi * n_sizes + si) * n_levels + li) * HIST_BINS..]
                    [..HIST_BINS];
                rows.push(CoverageRow {
                    method: tag.name().to_string(),
                    setting: config.setting.name().to_string(),
                    n,
                    level,
                    coverage,
                    mean_width,
                    width_quantiles: [
                        hist_quantile(hist_cell, 0.25),
                        hist_quantile(hist_cell, 0.5),
                        hist_quantile(hist_cell, 0.75),
                    ],
                    invalid_count: cell.invalid,
                    reps,
                });
            }
            errors.push(CoverageErrorRow {
                method: tag.name().to_string(),
                n,
                coverage_error: coverage_error(&coverages, &config.levels)?,
            });
        }
    }

    Ok(CoverageReport {
        schema: "uq-coverage-report/v1".into(),
        setting: config.setting.name().to_string(),
        master_seed: config.master_seed,
        rows,
        coverage_error: errors,
    })
}

fn run_task(config: &SimConfig, task: usize, hist: &Mutex<Vec<u64>>) -> Result<Vec<CellStats>> {
    let n_sizes = config.sizes.len();
    let n_levels = config.levels.len();
    let n_methods = config.methods.len();
    let draw = task / n_sizes;
    let si = task % n_sizes;
    let n = config.sizes[si];

    let setting_stream = RngStream::new(config.master_seed, 0).substream(config.setting.index());
    let draw_stream = setting_stream.substream(draw as u64);
    // The parameter draw is shared by every size of this replication; it is
    // re-derived identically in each size's task.
    let params = config.data_prior.sample(config.setting, &mut draw_stream.substream(0).rng())?;
    let size_stream = draw_stream.substream(1 + si as u64);

    let mut stats = vec![CellStats::default(); n_methods * n_levels];
    let mut local_hist = vec![0u32; n_methods * n_levels * HIST_BINS];

    for dataset_idx in 0..config.n_datasets_per_draw {
        let ds_stream = size_stream.substream(u64::from(dataset_idx));
        let data = generate_dataset(config, &params, n, ds_stream.substream(0))?;

        for (mi, &tag) in config.methods.iter().enumerate() {
            let target = true_target(tag.target(), &params);
            let method_stream = ds_stream.substream(1 + mi as u64);
            match compute_intervals(tag, &data, &config.levels, &config.draw_counts, method_stream, target)
            {
                Ok(intervals) => {
                    for (li, interval) in intervals.iter().enumerate() {
                        let cell = &mut stats[mi * n_levels + li];
                        if interval.contains(target) {
                            cell.covered += 1;
                        }
                        let d = &interval.diagnostics;
                        if d.zero_width || d.out_of_unit_range || d.unbounded {
                            cell.invalid += 1;
                        }
                        let width = interval.width();
                        if width.is_finite() {
                            cell.width_sum += width;
                            cell.finite_widths += 1;
                            local_hist[(mi * n_levels + li) * HIST_BINS + width_bin(width)] += 1;
                        }
                    }
                }
                // Data-degenerate failure (for example an all-TN confusion
                // sample): no interval exists, so it covers nothing.
                Err(_) => {
                    for li in 0..n_levels {
                        stats[mi * n_levels + li].invalid += 1;
                    }
                }
            }
        }
    }

    // Histogram counts are integers; merge order cannot change the totals.
    {
        let mut global = hist.lock().expect("no panics hold the histogram lock");
        for mi in 0..n_methods {
            for li in 0..n_levels {
                let local_base = (mi * n_levels + li) * HIST_BINS;
                let global_base = ((mi * n_sizes + si) * n_levels + li) * HIST_BINS;
                for bin in 0..HIST_BINS {
                    global[global_base + bin] += u64::from(local_hist[local_base + bin]);
                }
            }
        }
    }

    Ok(stats)
}

fn generate_dataset(
    config: &SimConfig,
    params: &DrawnParams,
    n: u32,
    stream: RngStream,
) -> Result<Dataset> {
    Ok(match (config.setting, params) {
        (Setting::Iid, DrawnParams::Iid { theta }) => Dataset::Iid(gen_iid(*theta, n, stream)?),
        (Setting::Clustered, DrawnParams::Clustered { theta, dispersion }) => Dataset::Clustered(
            gen_clustered(*theta, *dispersion, &config.cluster_sizes(n), stream)?,
        ),
        (Setting::IndependentPair, DrawnParams::Pair { theta_a, theta_b }) => Dataset::Pair(
            gen_iid(*theta_a, n, stream.substream(0))?,
            gen_iid(*theta_b, n, stream.substream(1))?,
        ),
        (Setting::Paired, DrawnParams::Paired { theta_a, theta_b, rho }) => {
            Dataset::Paired(gen_paired(*theta_a, *theta_b, *rho, n, stream)?)
        }
        (Setting::Confusion, DrawnParams::Confusion { theta }) => {
            Dataset::Confusion(gen_confusion(theta, n, stream)?)
        }
        _ => return Err(Error::Config("setting and drawn parameters disagree".into())),
    })
}

#[cfg(feature = "parallel")]
fn map_tasks<T, F>(n: usize, threads: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let run = || (0..n).into_par_iter().map(&f).collect::<Result<Vec<T>>>();
    match threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
            pool.install(run)
        }
        None => run(),
    }
}

#[cfg(not(feature = "parallel"))]
fn map_tasks<T, F>(n: usize, _threads: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::methods::MethodTag;

    fn tiny_config() -> SimConfig {
        let mut config = SimConfig::new(Setting::Iid);
        config.methods = vec![MethodTag::Clt, MethodTag::Wilson];
        config.n_param_draws = 4;
        config.n_datasets_per_draw = 10;
        config.sizes = vec![3, 10];
        config.levels = vec![0.8, 0.9, 0.95];
        config.master_seed = 1234;
        config
    }

    #[test]
    fn stub_full_range_covers_everything() {
        let mut config = tiny_config();
        config.methods = vec![MethodTag::StubFullRange];
        let report = run_coverage_experiment(&config).unwrap();
        assert!(report.rows.iter().all(|r| r.coverage == 1.0));
    }

    #[test]
    fn stub_true_point_covers_with_zero_width() {
        let mut config = tiny_config();
        config.methods = vec![MethodTag::StubTruePoint];
        let report = run_coverage_experiment(&config).unwrap();
        for row in &report.rows {
            assert_eq!(row.coverage, 1.0);
            assert_eq!(row.mean_width, 0.0);
            // Zero-width intervals are tallied as invalid.
            assert_eq!(row.invalid_count, row.reps);
        }
    }

    #[test]
    fn incompatible_method_fails_before_simulation() {
        let mut config = tiny_config();
        config.methods = vec![MethodTag::BayesClustered];
        assert!(matches!(run_coverage_experiment(&config), Err(Error::Config(_))));
    }

    #[test]
    fn thread_counts_do_not_change_results() {
        let config = tiny_config();
        let one = run_coverage_experiment_with_threads(&config, Some(1)).unwrap();
        let four = run_coverage_experiment_with_threads(&config, Some(4)).unwrap();
        assert_eq!(one.to_csv(), four.to_csv());
        assert_eq!(one.to_json(), four.to_json());
    }

    #[test]
    fn rows_are_method_size_level_ordered() {
        let config = tiny_config();
        let report = run_coverage_experiment(&config).unwrap();
        assert_eq!(report.rows.len(), 2 * 2 * 3);
        assert_eq!(report.rows[0].method, "clt");
        assert_eq!(report.rows[0].n, 3);
        assert!((report.rows[0].level - 0.8).abs() < 1e-12);
        assert_eq!(report.rows[5].method, "clt");
        assert_eq!(report.rows[5].n, 10);
        assert_eq!(report.rows[6].method, "wilson");
    }

    #[test]
    fn width_histogram_binning_round_trips() {
        for &w in &[0.0, 1e-7, 1e-6, 0.001, 0.5, 1.0, 7.3, 1e11, 1e13, 5e14] {
            let bin = width_bin(w);
            assert!(bin < HIST_BINS);
            let rep = bin_representative(bin);
            if w == 0.0 {
                assert_eq!(rep, 0.0);
            } else if (1e-6..1e12).contains(&w) {
                // Within the log range the representative is within one bin
                // (10^(1/50) ≈ 4.7%).
                assert!((rep.log10() - w.log10()).abs() <= 0.5 / 25.0, "w={w} rep={rep}");
            }
        }
    }
}
