//! Confusion-matrix metrics: F1 point estimate, delta-method interval,
//! Dirichlet-multinomial credible intervals, and the multinomial bootstrap.

use rand::Rng;

use crate::data::ConfusionCounts;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::posterior::{hdi, quantile_interval_sorted, PosteriorSamples};
use crate::single::{check_level, z_value};
use crate::stats::rng::RngStream;
use crate::stats::sampling::sample_dirichlet;

/// Credible interval forms for the posterior F1 distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CredibleKind {
    /// Central quantile-based interval.
    Quantile,
    /// Highest-density interval (shortest window at the given mass).
    Hdi,
}

/// F1 on the category proportions; `None` when the denominator vanishes.
fn f1_of_theta(tp: f64, fp: f64, fn_: f64) -> Option<f64> {
    let denom = 2.0 * tp + fp + fn_;
    if denom > 0.0 {
        Some(2.0 * tp / denom)
    } else {
        None
    }
}

/// Point F1 score `2·TP / (2·TP + FP + FN)`.
pub fn f1_point(c: &ConfusionCounts) -> Result<f64> {
    if c.f1_denominator() == 0 {
        return Err(Error::UndefinedMetric(
            "F1 is undefined when TP, FP, and FN are all zero".into(),
        ));
    }
    Ok(2.0 * c.n_tp as f64 / c.f1_denominator() as f64)
}

/// Delta-method interval
/// `F̂1 ± z·sqrt(F̂1(1−F̂1)(2−F̂1)/(2·TP+FP+FN))`.
///
/// The gradient of F1 has no TN component, so the interval is invariant to
/// the TN count. Returned unclamped with pathology flags.
pub fn f1_delta_interval(c: &ConfusionCounts, level: f64) -> Result<Interval> {
    let z = z_value(level)?;
    let f1 = f1_point(c)?;
    let se = (f1 * (1.0 - f1) * (2.0 - f1) / c.f1_denominator() as f64).sqrt();
    Ok(Interval::new(f1 - z * se, f1 + z * se, level, "delta").flag_unit_range())
}

/// Credible interval for F1 under the conjugate Dirichlet(1 + counts)
/// posterior, from `k` posterior draws pushed through the F1 map.
///
/// Draws whose F1 denominator is zero carry no information about F1 and
/// are excluded; the exclusion count is surfaced as a diagnostic.
pub fn bayes_f1_interval(
    c: &ConfusionCounts,
    level: f64,
    k: u32,
    stream: RngStream,
    kind: CredibleKind,
) -> Result<(Interval, PosteriorSamples)> {
    let (mut intervals, samples) = bayes_f1_interval_levels(c, &[level], k, stream, kind)?;
    Ok((intervals.pop().expect("one level in, one interval out"), samples))
}

/// Multi-level form of [`bayes_f1_interval`]: one posterior draw set shared
/// across levels.
pub fn bayes_f1_interval_levels(
    c: &ConfusionCounts,
    levels: &[f64],
    k: u32,
    stream: RngStream,
    kind: CredibleKind,
) -> Result<(Vec<Interval>, PosteriorSamples)> {
    for &level in levels {
        check_level(level)?;
    }
    if k < 1000 {
        return Err(Error::Domain(format!("posterior F1 interval needs K >= 1000 draws, got {k}")));
    }
    let alphas: Vec<f64> = c.as_array().iter().map(|&n| n as f64 + 1.0).collect();
    let mut rng = stream.rng();
    let mut excluded = 0u32;
    let mut draws = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let theta = sample_dirichlet(&alphas, &mut rng)?;
        match f1_of_theta(theta[0], theta[1], theta[2]) {
            Some(f1) => draws.push(f1),
            None => excluded += 1,
        }
    }
    if draws.is_empty() {
        return Err(Error::DegeneratePosterior(
            "every posterior draw had a zero F1 denominator".into(),
        ));
    }

    let method: &'static str = match kind {
        CredibleKind::Quantile => "bayes-qbi",
        CredibleKind::Hdi => "bayes-hdi",
    };
    let samples = PosteriorSamples::unweighted(draws);
    let mut sorted = samples.draws().to_vec();
    sorted.sort_by(f64::total_cmp);

    let intervals = levels
        .iter()
        .map(|&level| {
            let mut interval = match kind {
                CredibleKind::Quantile => quantile_interval_sorted(&sorted, level, method),
                CredibleKind::Hdi => {
                    let mut i = hdi(&samples, level).expect("validated draws");
                    i.method = method;
                    i
                }
            };
            interval.diagnostics.draws = Some(k);
            if excluded > 0 {
                interval.diagnostics.excluded_draws = Some(excluded);
            }
            interval
        })
        .collect();
    Ok((intervals, samples))
}

/// Percentile bootstrap for F1: resample N outcomes from the empirical
/// category distribution, recompute F1 per replicate.
pub fn bootstrap_f1_interval(
    c: &ConfusionCounts,
    level: f64,
    k: u32,
    stream: RngStream,
) -> Result<Interval> {
    Ok(bootstrap_f1_intervals(c, &[level], k, stream)?.pop().expect("one level in, one interval out"))
}

/// Multi-level form of [`bootstrap_f1_interval`].
///
/// Degenerate resamples (all TN, so F1 is undefined) are dropped and
/// counted, mirroring the posterior-draw exclusion policy.
pub fn bootstrap_f1_intervals(
    c: &ConfusionCounts,
    levels: &[f64],
    k: u32,
    stream: RngStream,
) -> Result<Vec<Interval>> {
    for &level in levels {
        check_level(level)?;
    }
    let n = c.total();
    if n == 0 {
        return Err(Error::EmptyData("bootstrap needs at least one classified outcome"));
    }
    if k < 100 {
        return Err(Error::Domain(format!("bootstrap needs K >= 100 resamples, got {k}")));
    }
    let probs: Vec<f64> = c.as_array().iter().map(|&v| v as f64 / n as f64).collect();
    let mut rng = stream.rng();
    let mut excluded = 0u32;
    let mut draws = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let counts = multinomial_resample(n, &probs, &mut rng);
        match f1_of_theta(counts[0] as f64, counts[1] as f64, counts[2] as f64) {
            Some(f1) => draws.push(f1),
            None => excluded += 1,
        }
    }
    if draws.is_empty() {
        return Err(Error::DegeneratePosterior("every bootstrap resample was all-TN".into()));
    }
    draws.sort_by(f64::total_cmp);

    Ok(levels
        .iter()
        .map(|&level| {
            let mut interval = quantile_interval_sorted(&draws, level, "bootstrap-f1");
            interval.diagnostics.draws = Some(k);
            if excluded > 0 {
                interval.diagnostics.excluded_draws = Some(excluded);
            }
            interval
        })
        .collect())
}

/// One multinomial draw via sequential conditional binomials.
pub(crate) fn multinomial_resample<R: Rng + ?Sized>(n: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let mut remaining_n = n;
    let mut remaining_p = 1.0;
    for (i, &p) in probs.iter().enumerate() {
        if remaining_n == 0 {
            break;
        }
        if i == probs.len() - 1 {
            counts[i] = remaining_n;
            break;
        }
        let cond = if remaining_p > 0.0 { (p / remaining_p).clamp(0.0, 1.0) } else { 0.0 };
        let draw = if cond >= 1.0 {
            remaining_n
        } else if cond <= 0.0 {
            0
        } else {
            let binom = rand_distr::Binomial::new(remaining_n, cond).expect("validated p");
            rand_distr::Distribution::sample(&binom, rng)
        };
        counts[i] = draw;
        remaining_n -= draw;
        remaining_p -= p;
    }
    counts
}
