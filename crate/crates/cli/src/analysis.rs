//! Subcommand implementations: ingest, dispatch methods, emit reports.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use uq_core::clustered::{bayes_clustered_interval_levels, clustered_clt_interval};
use uq_core::compare::{
    bayes_independent_comparison_levels, bayes_paired_diff_levels, clt_diff_interval,
    fisher_exact_or_interval, paired_clt_interval, prob_a_beats_b, ComparisonMetric,
};
use uq_core::confusion::{
    bayes_f1_interval_levels, bootstrap_f1_intervals, f1_delta_interval, f1_point, CredibleKind,
};
use uq_core::sim::{run_coverage_experiment, DrawCounts};
use uq_core::single::{
    bayes_beta_interval, bootstrap_intervals, clopper_pearson_interval, clt_interval, t_interval,
    wilson_interval,
};
use uq_core::{Interval, RngStream};

use crate::report::{AnalysisRecord, AnalysisReport};
use crate::{ingest, simcfg, AnalysisOpts, Metric, OutputFormat};

fn draw_counts(opts: &AnalysisOpts) -> DrawCounts {
    match opts.k {
        Some(k) => DrawCounts { posterior: k, bootstrap: k, importance: k },
        None => DrawCounts::default(),
    }
}

fn check_levels(levels: &[f64]) -> Result<()> {
    if levels.is_empty() {
        bail!("at least one --level is required");
    }
    for &l in levels {
        if !(l > 0.0 && l < 1.0) {
            bail!("levels must lie strictly inside (0, 1), got {l}");
        }
    }
    Ok(())
}

fn write_report(report: &AnalysisReport, opts: &AnalysisOpts) -> Result<()> {
    let rendered = match opts.format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => report.to_csv(),
    };
    match &opts.out {
        Some(path) => std::fs::write(path, rendered)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn push_all(report: &mut AnalysisReport, intervals: &[Interval], estimate: f64) {
    for interval in intervals {
        report.records.push(AnalysisRecord::from_interval(interval, estimate));
    }
}

pub fn run_single(input: &Path, methods: &[String], opts: &AnalysisOpts) -> Result<()> {
    check_levels(&opts.level)?;
    let y = ingest::read_single(input)?;
    if y.is_empty() {
        bail!("{}: no outcomes", input.display());
    }
    let ks = draw_counts(opts);
    let root = RngStream::new(opts.seed, 0);
    let mut report =
        AnalysisReport::new("single", vec![input.display().to_string()], opts.level.clone(), opts.seed);
    let estimate = y.mean();

    for (mi, name) in methods.iter().enumerate() {
        let stream = root.substream(mi as u64);
        let intervals: Vec<Interval> = match name.as_str() {
            "clt" => per_level(&opts.level, |l| clt_interval(&y, l))?,
            "t" => per_level(&opts.level, |l| t_interval(&y, l))?,
            "wilson" => per_level(&opts.level, |l| wilson_interval(&y, l))?,
            "cp" | "clopper-pearson" => per_level(&opts.level, |l| clopper_pearson_interval(&y, l))?,
            "bayes" => per_level(&opts.level, |l| bayes_beta_interval(&y, l))?,
            "bootstrap" => bootstrap_intervals(&y, &opts.level, ks.bootstrap, stream)?,
            other => bail!("unknown method `{other}` for `uq single`"),
        };
        push_all(&mut report, &intervals, estimate);
    }
    write_report(&report, opts)
}

pub fn run_compare(
    input_a: &Path,
    input_b: &Path,
    metric: Metric,
    methods: &[String],
    opts: &AnalysisOpts,
) -> Result<()> {
    check_levels(&opts.level)?;
    let a = ingest::read_single(input_a)?;
    let b = ingest::read_single(input_b)?;
    if a.is_empty() || b.is_empty() {
        bail!("both inputs need at least one outcome");
    }
    let ks = draw_counts(opts);
    let root = RngStream::new(opts.seed, 0);
    let mut report = AnalysisReport::new(
        "compare",
        vec![input_a.display().to_string(), input_b.display().to_string()],
        opts.level.clone(),
        opts.seed,
    );
    let diff_estimate = a.mean() - b.mean();
    let or_estimate = (a.mean() / (1.0 - a.mean())) / (b.mean() / (1.0 - b.mean()));

    for (mi, name) in methods.iter().enumerate() {
        let stream = root.substream(mi as u64);
        match name.as_str() {
            "clt" => {
                let intervals = per_level(&opts.level, |l| clt_diff_interval(&a, &b, l))?;
                push_all(&mut report, &intervals, diff_estimate);
            }
            "fisher" => {
                let intervals = per_level(&opts.level, |l| fisher_exact_or_interval(&a, &b, l))?;
                push_all(&mut report, &intervals, or_estimate);
            }
            "bayes" => {
                let (core_metric, estimate) = match metric {
                    Metric::Diff => (ComparisonMetric::Difference, diff_estimate),
                    Metric::Or => (ComparisonMetric::OddsRatio, or_estimate),
                };
                let (intervals, _) = bayes_independent_comparison_levels(
                    &a,
                    &b,
                    &opts.level,
                    core_metric,
                    ks.posterior,
                    stream,
                )?;
                push_all(&mut report, &intervals, estimate);
            }
            other => bail!("unknown method `{other}` for `uq compare`"),
        }
    }
    report.prob_a_beats_b =
        Some(prob_a_beats_b(&a, &b, ks.posterior.max(1000), root.substream(999))?);
    write_report(&report, opts)
}

pub fn run_paired(input: &Path, methods: &[String], opts: &AnalysisOpts) -> Result<()> {
    check_levels(&opts.level)?;
    let data = ingest::read_paired(input)?;
    if data.n() == 0 {
        bail!("{}: no outcomes", input.display());
    }
    let ks = draw_counts(opts);
    let root = RngStream::new(opts.seed, 0);
    let mut report =
        AnalysisReport::new("paired", vec![input.display().to_string()], opts.level.clone(), opts.seed);
    let estimate = data.y_a().mean() - data.y_b().mean();

    for (mi, name) in methods.iter().enumerate() {
        let stream = root.substream(mi as u64);
        let intervals: Vec<Interval> = match name.as_str() {
            "paired-clt" => per_level(&opts.level, |l| paired_clt_interval(&data, l))?,
            "clt" | "clt-diff" => {
                per_level(&opts.level, |l| clt_diff_interval(data.y_a(), data.y_b(), l))?
            }
            "bayes-paired" => {
                bayes_paired_diff_levels(&data, &opts.level, ks.importance, stream).map(|(i, _)| i)?
            }
            "bayes-unpaired" => bayes_independent_comparison_levels(
                data.y_a(),
                data.y_b(),
                &opts.level,
                ComparisonMetric::Difference,
                ks.posterior,
                stream,
            )
            .map(|(i, _)| i)?,
            other => bail!("unknown method `{other}` for `uq paired`"),
        };
        push_all(&mut report, &intervals, estimate);
    }
    report.prob_a_beats_b = Some(prob_a_beats_b(
        data.y_a(),
        data.y_b(),
        ks.posterior.max(1000),
        root.substream(999),
    )?);
    write_report(&report, opts)
}

pub fn run_clustered(input: &Path, methods: &[String], opts: &AnalysisOpts) -> Result<()> {
    check_levels(&opts.level)?;
    let data = ingest::read_clustered(input)?;
    let pooled = data.pooled_vector();
    let ks = draw_counts(opts);
    let root = RngStream::new(opts.seed, 0);
    let mut report =
        AnalysisReport::new("clustered", vec![input.display().to_string()], opts.level.clone(), opts.seed);
    let estimate = data.pooled_mean();

    for (mi, name) in methods.iter().enumerate() {
        let stream = root.substream(mi as u64);
        let intervals: Vec<Interval> = match name.as_str() {
            "clt" => per_level(&opts.level, |l| clt_interval(&pooled, l))?,
            "t" => per_level(&opts.level, |l| t_interval(&pooled, l))?,
            "wilson" => per_level(&opts.level, |l| wilson_interval(&pooled, l))?,
            "cp" | "clopper-pearson" => per_level(&opts.level, |l| clopper_pearson_interval(&pooled, l))?,
            "bayes" => per_level(&opts.level, |l| bayes_beta_interval(&pooled, l))?,
            "bootstrap" => bootstrap_intervals(&pooled, &opts.level, ks.bootstrap, stream)?,
            "clustered-clt" => per_level(&opts.level, |l| clustered_clt_interval(&data, l))?,
            "bayes-clustered" => {
                bayes_clustered_interval_levels(&data, &opts.level, ks.importance, stream)
                    .map(|(i, _)| i)?
            }
            other => bail!("unknown method `{other}` for `uq clustered`"),
        };
        push_all(&mut report, &intervals, estimate);
    }
    write_report(&report, opts)
}

pub fn run_confusion(input: &Path, methods: &[String], opts: &AnalysisOpts) -> Result<()> {
    check_levels(&opts.level)?;
    let counts = ingest::read_confusion(input)?;
    let ks = draw_counts(opts);
    let root = RngStream::new(opts.seed, 0);
    let mut report =
        AnalysisReport::new("confusion", vec![input.display().to_string()], opts.level.clone(), opts.seed);
    let estimate = f1_point(&counts).unwrap_or(f64::NAN);

    for (mi, name) in methods.iter().enumerate() {
        let stream = root.substream(mi as u64);
        let intervals: Vec<Interval> = match name.as_str() {
            "delta" => per_level(&opts.level, |l| f1_delta_interval(&counts, l))?,
            "bayes-qbi" => {
                bayes_f1_interval_levels(&counts, &opts.level, ks.posterior, stream, CredibleKind::Quantile)
                    .map(|(i, _)| i)?
            }
            "bayes-hdi" => {
                bayes_f1_interval_levels(&counts, &opts.level, ks.posterior, stream, CredibleKind::Hdi)
                    .map(|(i, _)| i)?
            }
            "bootstrap" => bootstrap_f1_intervals(&counts, &opts.level, ks.bootstrap, stream)?,
            other => bail!("unknown method `{other}` for `uq confusion`"),
        };
        push_all(&mut report, &intervals, estimate);
    }
    write_report(&report, opts)
}

pub fn run_simulate(config_path: &Path, out_dir: &Path, fast: bool, seed: Option<u64>) -> Result<()> {
    let text = std::fs::read_to_string(config_path)
        .with_context(|| format!("cannot read {}", config_path.display()))?;
    let mut config = simcfg::parse(&text, config_path)?;
    if fast {
        config = config.fast();
    }
    if let Some(seed) = seed {
        config.master_seed = seed;
    }

    let report = run_coverage_experiment(&config).map_err(|e| anyhow!("{e}"))?;
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    let csv_path = out_dir.join("coverage.csv");
    let json_path = out_dir.join("coverage.json");
    std::fs::write(&csv_path, report.to_csv())
        .with_context(|| format!("cannot write {}", csv_path.display()))?;
    std::fs::write(&json_path, report.to_json())
        .with_context(|| format!("cannot write {}", json_path.display()))?;

    print!("{}", report.summary_table());
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

fn per_level(
    levels: &[f64],
    f: impl Fn(f64) -> uq_core::Result<Interval>,
) -> Result<Vec<Interval>> {
    levels.iter().map(|&l| f(l).map_err(|e| anyhow!("{e}"))).collect()
}
