//! Method registry: which interval constructions run in which setting, and
//! how each one maps a simulated dataset to intervals.

use crate::clustered::{bayes_clustered_interval_levels, clustered_clt_interval};
use crate::compare::{
    bayes_independent_comparison_levels, bayes_paired_diff_levels, clt_diff_interval,
    fisher_exact_or_interval, paired_clt_interval, ComparisonMetric,
};
use crate::confusion::{bayes_f1_interval_levels, bootstrap_f1_intervals, f1_delta_interval, CredibleKind};
use crate::data::{BinaryEvalVector, ClusteredEvalData, ConfusionCounts, PairedEvalData};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::sim::config::{DrawCounts, DrawnParams, Setting};
use crate::single::{
    bayes_beta_interval, bootstrap_intervals, clopper_pearson_interval, clt_interval, t_interval,
    wilson_interval,
};
use crate::stats::rng::RngStream;

/// One simulated dataset, in whichever shape the setting produces.
#[derive(Debug, Clone)]
pub enum Dataset {
    Iid(BinaryEvalVector),
    Clustered(ClusteredEvalData),
    Pair(BinaryEvalVector, BinaryEvalVector),
    Paired(PairedEvalData),
    Confusion(ConfusionCounts),
}

/// What a method's interval is trying to cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    Theta,
    Difference,
    OddsRatio,
    F1,
}

/// Interval methods the harness can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodTag {
    Clt,
    TDist,
    Wilson,
    ClopperPearson,
    Bootstrap,
    BayesBeta,
    ClusteredClt,
    BayesClustered,
    CltDiff,
    PairedClt,
    BayesDiff,
    BayesOr,
    FisherOr,
    BayesPaired,
    BayesUnpaired,
    Delta,
    BayesQbi,
    BayesHdi,
    BootstrapF1,
    /// Test hook: always returns [0, 1] (or the widest target range).
    #[doc(hidden)]
    StubFullRange,
    /// Test hook: zero-width interval at the true target value.
    #[doc(hidden)]
    StubTruePoint,
}

impl MethodTag {
    pub fn name(&self) -> &'static str {
        match self {
            MethodTag::Clt => "clt",
            MethodTag::TDist => "t",
            MethodTag::Wilson => "wilson",
            MethodTag::ClopperPearson => "cp",
            MethodTag::Bootstrap => "bootstrap",
            MethodTag::BayesBeta => "bayes",
            MethodTag::ClusteredClt => "clustered-clt",
            MethodTag::BayesClustered => "bayes-clustered",
            MethodTag::CltDiff => "clt-diff",
            MethodTag::PairedClt => "paired-clt",
            MethodTag::BayesDiff => "bayes-diff",
            MethodTag::BayesOr => "bayes-or",
            MethodTag::FisherOr => "fisher-or",
            MethodTag::BayesPaired => "bayes-paired",
            MethodTag::BayesUnpaired => "bayes-unpaired",
            MethodTag::Delta => "delta",
            MethodTag::BayesQbi => "bayes-qbi",
            MethodTag::BayesHdi => "bayes-hdi",
            MethodTag::BootstrapF1 => "bootstrap-f1",
            MethodTag::StubFullRange => "stub-full-range",
            MethodTag::StubTruePoint => "stub-true-point",
        }
    }

    /// Parses a method name in the context of a setting, so short names
    /// like `clt`, `bayes`, and `bootstrap` resolve to the setting's
    /// variant.
    pub fn parse(name: &str, setting: Setting) -> Result<Self> {
        use MethodTag::*;
        use Setting::*;
        let tag = match (name, setting) {
            ("clt", Iid | Clustered) => Clt,
            ("clt" | "clt-diff", IndependentPair | Paired) => CltDiff,
            ("t", Iid | Clustered) => TDist,
            ("wilson", Iid | Clustered) => Wilson,
            ("cp" | "clopper-pearson", Iid | Clustered) => ClopperPearson,
            ("bootstrap", Iid | Clustered) => Bootstrap,
            ("bootstrap" | "bootstrap-f1", Confusion) => BootstrapF1,
            ("bayes" | "bayes-beta", Iid | Clustered) => BayesBeta,
            ("clustered-clt", Clustered) => ClusteredClt,
            ("bayes-clustered", Clustered) => BayesClustered,
            ("bayes-diff", IndependentPair) => BayesDiff,
            ("bayes-or", IndependentPair) => BayesOr,
            ("fisher" | "fisher-or", IndependentPair) => FisherOr,
            ("paired-clt", Paired) => PairedClt,
            ("bayes-paired", Paired) => BayesPaired,
            ("bayes-unpaired", Paired) => BayesUnpaired,
            ("delta", Confusion) => Delta,
            ("bayes-qbi", Confusion) => BayesQbi,
            ("bayes-hdi", Confusion) => BayesHdi,
            _ => {
                return Err(Error::Config(format!(
                    "unknown method '{name}' for the {} setting",
                    setting.name()
                )))
            }
        };
        Ok(tag)
    }

    pub fn supports(&self, setting: Setting) -> bool {
        use MethodTag::*;
        match self {
            Clt | TDist | Wilson | ClopperPearson | Bootstrap | BayesBeta => {
                matches!(setting, Setting::Iid | Setting::Clustered)
            }
            ClusteredClt | BayesClustered => setting == Setting::Clustered,
            CltDiff => matches!(setting, Setting::IndependentPair | Setting::Paired),
            BayesDiff | BayesOr | FisherOr => setting == Setting::IndependentPair,
            PairedClt | BayesPaired | BayesUnpaired => setting == Setting::Paired,
            Delta | BayesQbi | BayesHdi | BootstrapF1 => setting == Setting::Confusion,
            StubFullRange | StubTruePoint => true,
        }
    }

    pub fn target(&self) -> TargetKind {
        use MethodTag::*;
        match self {
            Clt | TDist | Wilson | ClopperPearson | Bootstrap | BayesBeta | ClusteredClt
            | BayesClustered | StubFullRange | StubTruePoint => TargetKind::Theta,
            CltDiff | PairedClt | BayesDiff | BayesPaired | BayesUnpaired => TargetKind::Difference,
            BayesOr | FisherOr => TargetKind::OddsRatio,
            Delta | BayesQbi | BayesHdi | BootstrapF1 => TargetKind::F1,
        }
    }

    /// Smallest dataset size the method is defined for.
    pub fn min_n(&self) -> u32 {
        match self {
            MethodTag::TDist | MethodTag::PairedClt => 2,
            _ => 1,
        }
    }

    /// Standard method set for a setting.
    pub fn defaults_for(setting: Setting) -> Vec<MethodTag> {
        use MethodTag::*;
        match setting {
            Setting::Iid => vec![Clt, TDist, Bootstrap, Wilson, ClopperPearson, BayesBeta],
            Setting::Clustered => vec![Clt, ClusteredClt, Wilson, ClopperPearson, BayesBeta, BayesClustered],
            Setting::IndependentPair => vec![CltDiff, BayesDiff, BayesOr, FisherOr],
            Setting::Paired => vec![PairedClt, CltDiff, BayesPaired, BayesUnpaired],
            Setting::Confusion => vec![Delta, BayesQbi, BayesHdi, BootstrapF1],
        }
    }
}

/// The true value of a method's target under the drawn parameters.
pub fn true_target(kind: TargetKind, params: &DrawnParams) -> f64 {
    match (kind, params) {
        (TargetKind::Theta, DrawnParams::Iid { theta }) => *theta,
        (TargetKind::Theta, DrawnParams::Clustered { theta, .. }) => *theta,
        (TargetKind::Difference, DrawnParams::Pair { theta_a, theta_b }) => theta_a - theta_b,
        (TargetKind::Difference, DrawnParams::Paired { theta_a, theta_b, .. }) => theta_a - theta_b,
        (TargetKind::OddsRatio, DrawnParams::Pair { theta_a, theta_b }) => {
            (theta_a / (1.0 - theta_a)) / (theta_b / (1.0 - theta_b))
        }
        (TargetKind::F1, DrawnParams::Confusion { theta }) => {
            2.0 * theta[0] / (2.0 * theta[0] + theta[1] + theta[2])
        }
        // Stubs run in the iid setting only; other combinations are ruled
        // out by SimConfig::validate.
        _ => f64::NAN,
    }
}

/// Computes one interval per level for `tag` on `data`.
///
/// `target` is consumed only by the test-stub methods.
pub fn compute_intervals(
    tag: MethodTag,
    data: &Dataset,
    levels: &[f64],
    draws: &DrawCounts,
    stream: RngStream,
    target: f64,
) -> Result<Vec<Interval>> {
    use MethodTag::*;
    let per_level = |f: &dyn Fn(f64) -> Result<Interval>| -> Result<Vec<Interval>> {
        levels.iter().map(|&level| f(level)).collect()
    };

    match (tag, data) {
        (Clt, Dataset::Iid(y)) => per_level(&|l| clt_interval(y, l)),
        (TDist, Dataset::Iid(y)) => per_level(&|l| t_interval(y, l)),
        (Wilson, Dataset::Iid(y)) => per_level(&|l| wilson_interval(y, l)),
        (ClopperPearson, Dataset::Iid(y)) => per_level(&|l| clopper_pearson_interval(y, l)),
        (BayesBeta, Dataset::Iid(y)) => per_level(&|l| bayes_beta_interval(y, l)),
        (Bootstrap, Dataset::Iid(y)) => bootstrap_intervals(y, levels, draws.bootstrap, stream),

        // Pooled (cluster-blind) methods on clustered data.
        (Clt, Dataset::Clustered(c)) => {
            let y = c.pooled_vector();
            per_level(&|l| clt_interval(&y, l))
        }
        (TDist, Dataset::Clustered(c)) => {
            let y = c.pooled_vector();
            per_level(&|l| t_interval(&y, l))
        }
        (Wilson, Dataset::Clustered(c)) => {
            let y = c.pooled_vector();
            per_level(&|l| wilson_interval(&y, l))
        }
        (ClopperPearson, Dataset::Clustered(c)) => {
            let y = c.pooled_vector();
            per_level(&|l| clopper_pearson_interval(&y, l))
        }
        (BayesBeta, Dataset::Clustered(c)) => {
            let y = c.pooled_vector();
            per_level(&|l| bayes_beta_interval(&y, l))
        }
        (Bootstrap, Dataset::Clustered(c)) => {
            bootstrap_intervals(&c.pooled_vector(), levels, draws.bootstrap, stream)
        }
        (ClusteredClt, Dataset::Clustered(c)) => per_level(&|l| clustered_clt_interval(c, l)),
        (BayesClustered, Dataset::Clustered(c)) => {
            bayes_clustered_interval_levels(c, levels, draws.importance, stream).map(|(i, _)| i)
        }

        (CltDiff, Dataset::Pair(a, b)) => per_level(&|l| clt_diff_interval(a, b, l)),
        (BayesDiff, Dataset::Pair(a, b)) => {
            bayes_independent_comparison_levels(a, b, levels, ComparisonMetric::Difference, draws.posterior, stream)
                .map(|(i, _)| i)
        }
        (BayesOr, Dataset::Pair(a, b)) => {
            bayes_independent_comparison_levels(a, b, levels, ComparisonMetric::OddsRatio, draws.posterior, stream)
                .map(|(i, _)| i)
        }
        (FisherOr, Dataset::Pair(a, b)) => per_level(&|l| fisher_exact_or_interval(a, b, l)),

        (PairedClt, Dataset::Paired(d)) => per_level(&|l| paired_clt_interval(d, l)),
        (CltDiff, Dataset::Paired(d)) => per_level(&|l| clt_diff_interval(d.y_a(), d.y_b(), l)),
        (BayesPaired, Dataset::Paired(d)) => {
            bayes_paired_diff_levels(d, levels, draws.importance, stream).map(|(i, _)| i)
        }
        (BayesUnpaired, Dataset::Paired(d)) => bayes_independent_comparison_levels(
            d.y_a(),
            d.y_b(),
            levels,
            ComparisonMetric::Difference,
            draws.posterior,
            stream,
        )
        .map(|(i, _)| i),

        (Delta, Dataset::Confusion(c)) => per_level(&|l| f1_delta_interval(c, l)),
        (BayesQbi, Dataset::Confusion(c)) => {
            bayes_f1_interval_levels(c, levels, draws.posterior, stream, CredibleKind::Quantile)
                .map(|(i, _)| i)
        }
        (BayesHdi, Dataset::Confusion(c)) => {
            bayes_f1_interval_levels(c, levels, draws.posterior, stream, CredibleKind::Hdi)
                .map(|(i, _)| i)
        }
        (BootstrapF1, Dataset::Confusion(c)) => {
            bootstrap_f1_intervals(c, levels, draws.bootstrap, stream)
        }

        (StubFullRange, _) => {
            Ok(levels.iter().map(|&l| Interval::new(0.0, 1.0, l, "stub-full-range")).collect())
        }
        (StubTruePoint, _) => {
            Ok(levels.iter().map(|&l| Interval::new(target, target, l, "stub-true-point")).collect())
        }

        _ => Err(Error::Config(format!(
            "method '{}' cannot run on this dataset shape",
            tag.name()
        ))),
    }
}
