//! Clustered-question inference: clustered standard errors and the
//! Beta-Binomial hierarchical model fit by importance sampling.

use crate::data::ClusteredEvalData;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::posterior::{
    effective_sample_size, normalize_log_weights, quantile_interval_sorted, weighted_resample,
    PosteriorSamples,
};
use crate::single::{check_level, z_value};
use crate::stats::rng::RngStream;
use crate::stats::sampling::{sample_beta, sample_gamma};
use crate::stats::special::{ln_choose, log_gamma_unchecked};

/// Clustered standard error with its clamp diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteredSe {
    pub value: f64,
    /// The cross-term adjustment drove the variance negative and it was
    /// clamped to zero.
    pub clamped: bool,
}

/// Standard error with within-cluster cross-covariance terms.
///
/// `SE² = SE_CLT² + (1/N²)·Σ_t Σ_{i≠j in t} (y_i − ȳ)(y_j − ȳ)`. For binary
/// outcomes the inner double sum reduces to sufficient statistics:
/// `(Y_t − N_t·ȳ)² − [Y_t(1−ȳ)² + (N_t−Y_t)ȳ²]`, making the whole
/// computation O(T).
pub fn clustered_se(data: &ClusteredEvalData) -> Result<ClusteredSe> {
    let n = data.total_questions();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "clustered standard error needs N >= 2 questions, got {n}"
        )));
    }
    let n_f = n as f64;
    let ybar = data.pooled_mean();
    let se_clt_sq = ybar * (1.0 - ybar) / n_f;

    let mut cross = 0.0;
    for &(nt, yt) in data.clusters() {
        let (nt, yt) = (nt as f64, yt as f64);
        let centered_sum = yt - nt * ybar;
        let centered_sq = yt * (1.0 - ybar) * (1.0 - ybar) + (nt - yt) * ybar * ybar;
        cross += centered_sum * centered_sum - centered_sq;
    }

    let var = se_clt_sq + cross / (n_f * n_f);
    if var < 0.0 {
        Ok(ClusteredSe { value: 0.0, clamped: true })
    } else {
        Ok(ClusteredSe { value: var.sqrt(), clamped: false })
    }
}

/// CLT interval around the pooled mean using the clustered standard error.
/// Unclamped, with the same pathology flags as the plain CLT interval.
pub fn clustered_clt_interval(data: &ClusteredEvalData, level: f64) -> Result<Interval> {
    let z = z_value(level)?;
    let se = clustered_se(data)?;
    let ybar = data.pooled_mean();
    let mut interval = Interval::new(ybar - z * se.value, ybar + z * se.value, level, "clustered-clt")
        .flag_unit_range();
    interval.diagnostics.variance_clamped = se.clamped;
    Ok(interval)
}

/// Credible interval for the global success rate under the hierarchical
/// model (per-cluster rates mixing around θ with concentration d), fit by
/// importance sampling with the prior as proposal.
pub fn bayes_clustered_interval(
    data: &ClusteredEvalData,
    level: f64,
    k: u32,
    stream: RngStream,
) -> Result<(Interval, PosteriorSamples)> {
    let (mut intervals, samples) = bayes_clustered_interval_levels(data, &[level], k, stream)?;
    Ok((intervals.pop().expect("one level in, one interval out"), samples))
}

/// Multi-level form of [`bayes_clustered_interval`]: one importance-sample
/// run shared across levels.
///
/// The log-weight of a draw `(θ, d)` is the Beta-Binomial log-likelihood
/// `Σ_t log BetaBin(Y_t; N_t, dθ, d(1−θ))`, accumulated in log space with
/// max-subtraction before normalization.
pub fn bayes_clustered_interval_levels(
    data: &ClusteredEvalData,
    levels: &[f64],
    k: u32,
    stream: RngStream,
) -> Result<(Vec<Interval>, PosteriorSamples)> {
    for &level in levels {
        check_level(level)?;
    }
    if k < 1000 {
        return Err(Error::Domain(format!("clustered importance sampler needs K >= 1000, got {k}")));
    }

    // Group identical (n_t, y_t) clusters; sorting makes the accumulation
    // order canonical so cluster permutations give bit-identical results.
    let mut grouped: Vec<((u64, u64), f64)> = Vec::new();
    {
        let mut sorted = data.clusters().to_vec();
        sorted.sort_unstable();
        for &(n, y) in &sorted {
            match grouped.last_mut() {
                Some(((gn, gy), mult)) if *gn == n && *gy == y => *mult += 1.0,
                _ => grouped.push(((n, y), 1.0)),
            }
        }
    }
    let n_clusters = data.n_clusters() as f64;
    let ln_choose_total: f64 =
        grouped.iter().map(|&((n, y), mult)| mult * ln_choose(n as f64, y as f64)).sum();

    let mut rng = stream.substream(0).rng();
    let mut thetas = Vec::with_capacity(k as usize);
    let mut log_weights = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let theta = sample_beta(1.0, 1.0, &mut rng)?;
        let d = sample_gamma(1.0, 1.0, &mut rng)?;
        thetas.push(theta);

        let a = d * theta;
        let b = d * (1.0 - theta);
        if !(a > 0.0 && b > 0.0) {
            log_weights.push(f64::NEG_INFINITY);
            continue;
        }
        // ln B(a, b) appears once per cluster.
        let ln_beta_prior = log_gamma_unchecked(a) + log_gamma_unchecked(b) - log_gamma_unchecked(a + b);
        let mut lw = ln_choose_total - n_clusters * ln_beta_prior;
        for &((n, y), mult) in &grouped {
            let (n, y) = (n as f64, y as f64);
            lw += mult
                * (log_gamma_unchecked(y + a) + log_gamma_unchecked(n - y + b)
                    - log_gamma_unchecked(n + a + b));
        }
        log_weights.push(if lw.is_finite() { lw } else { f64::NEG_INFINITY });
    }

    let weights = normalize_log_weights(&log_weights, "Beta-Binomial cluster likelihood")?;
    let ess = effective_sample_size(&weights);

    let mut resample_rng = stream.substream(1).rng();
    let draws = weighted_resample(&thetas, &weights, k as usize, &mut resample_rng);
    let mut sorted = draws.clone();
    sorted.sort_by(f64::total_cmp);

    let intervals = levels
        .iter()
        .map(|&level| {
            let mut interval = quantile_interval_sorted(&sorted, level, "bayes-clustered");
            interval.diagnostics.ess = Some(ess);
            interval.diagnostics.draws = Some(k);
            interval
        })
        .collect();
    Ok((intervals, PosteriorSamples::resampled(draws, ess)))
}
