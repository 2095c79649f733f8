//! `uq`: confidence and credible intervals for small evaluation datasets,
//! plus a coverage simulation harness.

mod analysis;
mod ingest;
mod report;
mod simcfg;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "uq",
    version,
    about = "Uncertainty quantification for small-sample evaluation data",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Metric {
    Diff,
    Or,
}

/// Options shared by every analysis subcommand.
#[derive(Args)]
struct AnalysisOpts {
    /// Comma-separated confidence/credibility levels in (0, 1).
    #[arg(long, default_value = "0.95", value_delimiter = ',')]
    level: Vec<f64>,

    /// Monte Carlo draw count; overrides the per-method defaults
    /// (2000 posterior draws, 10000 bootstrap/importance samples).
    #[arg(long)]
    k: Option<u32>,

    /// Master seed for all sampling-based methods.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Intervals for one model on IID binary outcomes.
    Single {
        /// CSV with header `question_id,outcome`.
        #[arg(long)]
        input: PathBuf,
        /// Methods: clt, t, wilson, cp, bootstrap, bayes.
        #[arg(long, default_value = "clt,wilson,cp,bayes", value_delimiter = ',')]
        methods: Vec<String>,
        #[command(flatten)]
        opts: AnalysisOpts,
    },
    /// Compare two models evaluated on independent question sets.
    Compare {
        /// CSV with header `question_id,outcome` for model A.
        #[arg(long)]
        input_a: PathBuf,
        /// CSV with header `question_id,outcome` for model B.
        #[arg(long)]
        input_b: PathBuf,
        /// Comparison scale for the Bayesian method.
        #[arg(long, value_enum, default_value_t = Metric::Diff)]
        metric: Metric,
        /// Methods: clt, fisher, bayes.
        #[arg(long, default_value = "clt,fisher,bayes", value_delimiter = ',')]
        methods: Vec<String>,
        #[command(flatten)]
        opts: AnalysisOpts,
    },
    /// Compare two models evaluated on the same questions.
    Paired {
        /// CSV with header `question_id,outcome_a,outcome_b`.
        #[arg(long)]
        input: PathBuf,
        /// Methods: paired-clt, clt, bayes-paired, bayes-unpaired.
        #[arg(long, default_value = "paired-clt,bayes-paired,bayes-unpaired", value_delimiter = ',')]
        methods: Vec<String>,
        #[command(flatten)]
        opts: AnalysisOpts,
    },
    /// Intervals for clustered questions.
    Clustered {
        /// CSV with header `cluster_id,n,y`.
        #[arg(long)]
        input: PathBuf,
        /// Methods: clt, clustered-clt, wilson, cp, bayes, bayes-clustered.
        #[arg(long, default_value = "clt,clustered-clt,bayes-clustered", value_delimiter = ',')]
        methods: Vec<String>,
        #[command(flatten)]
        opts: AnalysisOpts,
    },
    /// Intervals for confusion-matrix F1.
    Confusion {
        /// CSV with the single data row `n_tp,n_fp,n_fn,n_tn`.
        #[arg(long)]
        input: PathBuf,
        /// Methods: delta, bayes-qbi, bayes-hdi, bootstrap.
        #[arg(long, default_value = "delta,bayes-qbi,bayes-hdi,bootstrap", value_delimiter = ',')]
        methods: Vec<String>,
        #[command(flatten)]
        opts: AnalysisOpts,
    },
    /// Run a coverage experiment from a config file.
    Simulate {
        /// Flat key-value config file (see README for the format).
        #[arg(long)]
        config: PathBuf,
        /// Directory for coverage.csv and coverage.json.
        #[arg(long)]
        out_dir: PathBuf,
        /// Desk-scale preset: 25 parameter draws × 50 datasets.
        #[arg(long)]
        fast: bool,
        /// Override the config file's master seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Single { input, methods, opts } => analysis::run_single(&input, &methods, &opts),
        Command::Compare { input_a, input_b, metric, methods, opts } => {
            analysis::run_compare(&input_a, &input_b, metric, &methods, &opts)
        }
        Command::Paired { input, methods, opts } => analysis::run_paired(&input, &methods, &opts),
        Command::Clustered { input, methods, opts } => {
            analysis::run_clustered(&input, &methods, &opts)
        }
        Command::Confusion { input, methods, opts } => {
            analysis::run_confusion(&input, &methods, &opts)
        }
        Command::Simulate { config, out_dir, fast, seed } => {
            analysis::run_simulate(&config, &out_dir, fast, seed)
        }
    }
}
