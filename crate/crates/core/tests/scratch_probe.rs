//! Temporary probe for acceptance-threshold calibration. Deleted before
//! final delivery.

use uq_core::sim::{
    run_coverage_experiment, MethodTag, Setting, SimConfig,
};

#[test]
#[ignore]
fn probe_criterion_1_clt_n100() {
    let mut config = SimConfig::new(Setting::Iid);
    config.methods = vec![MethodTag::Clt];
    config.sizes = vec![100];
    config.levels = vec![0.95];
    config.master_seed = 20250810;
    let start = std::time::Instant::now();
    let report = run_coverage_experiment(&config).unwrap();
    println!(
        "CLT N=100 level 0.95 coverage = {:.4} ({:?})",
        report.coverage_at("clt", 100, 0.95).unwrap(),
        start.elapsed()
    );
    for seed in [1u64, 2, 3] {
        let mut c = config.clone();
        c.master_seed = seed;
        let r = run_coverage_experiment(&c).unwrap();
        println!("  seed {seed}: {:.4}", r.coverage_at("clt", 100, 0.95).unwrap());
    }
}

#[test]
#[ignore]
fn probe_criterion_2_matched_prior() {
    for (setting, tag, name) in [
        (Setting::Iid, MethodTag::BayesBeta, "bayes"),
        (Setting::Confusion, MethodTag::BayesQbi, "bayes-qbi"),
        (Setting::Paired, MethodTag::BayesPaired, "bayes-paired"),
        (Setting::Clustered, MethodTag::BayesClustered, "bayes-clustered"),
    ] {
        let mut config = SimConfig::new(setting).fast();
        config.methods = vec![tag];
        config.master_seed = 20250810;
        let start = std::time::Instant::now();
        let report = run_coverage_experiment(&config).unwrap();
        let reps = 25.0 * 50.0;
        let mut worst: (f64, u32, f64, f64) = (0.0, 0, 0.0, 0.0);
        for row in &report.rows {
            let se = (row.level * (1.0 - row.level) / reps).sqrt();
            let dev = (row.coverage - row.level).abs();
            let excess = dev - 3.0 * se;
            if excess > worst.0 {
                worst = (excess, row.n, row.level, dev);
            }
        }
        println!(
            "{name}: worst excess over 3SE = {:.4} at N={} level {:.3} (dev {:.4}), took {:?}",
            worst.0, worst.1, worst.2, worst.3, start.elapsed()
        );
    }
}

#[test]
#[ignore]
fn probe_criteria_4_5() {
    let mut config = SimConfig::new(Setting::Iid).fast();
    config.methods = vec![MethodTag::Clt, MethodTag::Wilson];
    config.sizes = vec![3, 10, 30];
    config.master_seed = 20250810;
    let report = run_coverage_experiment(&config).unwrap();
    for n in [3, 10, 30] {
        println!(
            "N={n}: coverage_error clt = {:.4}, wilson = {:.4}",
            report.coverage_error_at("clt", n).unwrap(),
            report.coverage_error_at("wilson", n).unwrap()
        );
    }

    let mut config = SimConfig::new(Setting::Confusion).fast();
    config.methods = vec![MethodTag::BootstrapF1, MethodTag::BayesQbi];
    config.sizes = vec![10];
    config.master_seed = 20250810;
    let start = std::time::Instant::now();
    let report = run_coverage_experiment(&config).unwrap();
    println!(
        "N=10: coverage_error bootstrap-f1 = {:.4}, bayes-qbi = {:.4} ({:?})",
        report.coverage_error_at("bootstrap-f1", 10).unwrap(),
        report.coverage_error_at("bayes-qbi", 10).unwrap(),
        start.elapsed()
    );
}

#[test]
#[ignore]
fn probe_criterion_8_seed_se() {
    let seeds = [1u64, 2, 3, 4, 5];
    let mut reports = Vec::new();
    for &seed in &seeds {
        let mut config = SimConfig::new(Setting::Iid).fast();
        config.methods = vec![MethodTag::Wilson, MethodTag::ClopperPearson, MethodTag::BayesBeta];
        config.master_seed = seed;
        reports.push(run_coverage_experiment(&config).unwrap());
    }
    let n_rows = reports[0].rows.len();
    let mut worst = (0.0f64, String::new(), 0u32, 0.0f64);
    for i in 0..n_rows {
        let values: Vec<f64> = reports.iter().map(|r| r.rows[i].coverage).collect();
        let mean = values.iter().sum::<f64>() / 5.0;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 4.0;
        let se = (var / 5.0).sqrt();
        if se > worst.0 {
            let row = &reports[0].rows[i];
            worst = (se, row.method.clone(), row.n, row.level);
        }
    }
    println!("max per-level SE over 5 seeds = {:.5} ({} N={} level {:.3})", worst.0, worst.1, worst.2, worst.3);
}
