//! Two-model comparison: independent and paired CLT intervals, conjugate
//! posterior comparisons, exact Fisher odds-ratio intervals, and the paired
//! importance sampler.

use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::data::{BinaryEvalVector, PairedEvalData};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::posterior::{
    effective_sample_size, normalize_log_weights, quantile_interval_sorted, weighted_quantile_sorted,
    PosteriorSamples,
};
use crate::single::{check_level, z_value};
use crate::stats::normal::{bivariate_normal_cdf, std_normal_quantile, GaussianParams2D};
use crate::stats::rng::RngStream;
use crate::stats::special::ln_choose;

/// Which comparison scale a posterior interval is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonMetric {
    /// θ_A − θ_B.
    Difference,
    /// [θ_A/(1−θ_A)] / [θ_B/(1−θ_B)].
    OddsRatio,
}

/// CLT interval for θ_A − θ_B from two independent samples, with Bernoulli
/// plug-in variances.
pub fn clt_diff_interval(y_a: &BinaryEvalVector, y_b: &BinaryEvalVector, level: f64) -> Result<Interval> {
    let z = z_value(level)?;
    if y_a.is_empty() || y_b.is_empty() {
        return Err(Error::EmptyData("difference interval needs outcomes for both models"));
    }
    let (na, nb) = (y_a.len() as f64, y_b.len() as f64);
    let (ta, tb) = (y_a.mean(), y_b.mean());
    let se = (ta * (1.0 - ta) / na + tb * (1.0 - tb) / nb).sqrt();
    let diff = ta - tb;
    Ok(Interval::new(diff - z * se, diff + z * se, level, "clt-diff"))
}

/// Paired CLT interval on the per-question differences `D_i = y_A,i − y_B,i`.
pub fn paired_clt_interval(data: &PairedEvalData, level: f64) -> Result<Interval> {
    let z = z_value(level)?;
    if data.n() < 2 {
        return Err(Error::InsufficientData(format!(
            "paired interval needs N >= 2 for a sample variance, got N = {}",
            data.n()
        )));
    }
    let (mean, var) = data.diff_moments();
    let se = (var / data.n() as f64).sqrt();
    Ok(Interval::new(mean - z * se, mean + z * se, level, "paired-clt"))
}

/// Posterior comparison from independent Beta posteriors: `k` exact draws
/// per model, metric applied drawwise, interval from empirical quantiles.
pub fn bayes_independent_comparison(
    y_a: &BinaryEvalVector,
    y_b: &BinaryEvalVector,
    level: f64,
    metric: ComparisonMetric,
    k: u32,
    stream: RngStream,
) -> Result<(Interval, PosteriorSamples)> {
    let (mut intervals, samples) =
        bayes_independent_comparison_levels(y_a, y_b, &[level], metric, k, stream)?;
    Ok((intervals.pop().expect("one level in, one interval out"), samples))
}

/// Multi-level form of [`bayes_independent_comparison`]: one posterior draw
/// set shared across all requested levels.
pub fn bayes_independent_comparison_levels(
    y_a: &BinaryEvalVector,
    y_b: &BinaryEvalVector,
    levels: &[f64],
    metric: ComparisonMetric,
    k: u32,
    stream: RngStream,
) -> Result<(Vec<Interval>, PosteriorSamples)> {
    for &level in levels {
        check_level(level)?;
    }
    if k < 1000 {
        return Err(Error::Domain(format!("posterior comparison needs K >= 1000 draws, got {k}")));
    }
    let mut rng = stream.rng();
    let (pairs, _, _) = posterior_pairs(y_a, y_b, k, &mut rng)?;

    let method: &'static str = match metric {
        ComparisonMetric::Difference => "bayes-diff",
        ComparisonMetric::OddsRatio => "bayes-or",
    };
    let mut excluded = 0u32;
    let mut transformed: Vec<f64> = Vec::with_capacity(k as usize);
    for &(a, b) in &pairs {
        let value = match metric {
            ComparisonMetric::Difference => a - b,
            ComparisonMetric::OddsRatio => (a / (1.0 - a)) / (b / (1.0 - b)),
        };
        // A draw of exactly 1.0 in both denominators yields NaN; drop it.
        if value.is_nan() {
            excluded += 1;
        } else {
            transformed.push(value);
        }
    }
    if transformed.is_empty() {
        return Err(Error::DegeneratePosterior("every transformed posterior draw was NaN".into()));
    }

    let mut sorted = transformed.clone();
    sorted.sort_by(f64::total_cmp);
    let intervals = levels
        .iter()
        .map(|&level| {
            let mut interval = quantile_interval_sorted(&sorted, level, method);
            interval.diagnostics.draws = Some(k);
            if excluded > 0 {
                interval.diagnostics.excluded_draws = Some(excluded);
            }
            interval
        })
        .collect();
    Ok((intervals, PosteriorSamples::unweighted(transformed)))
}

/// Monte Carlo estimate of `P(θ_A > θ_B | data)` from independent Beta
/// posteriors.
pub fn prob_a_beats_b(
    y_a: &BinaryEvalVector,
    y_b: &BinaryEvalVector,
    k: u32,
    stream: RngStream,
) -> Result<f64> {
    if k < 1000 {
        return Err(Error::Domain(format!("prob_a_beats_b needs K >= 1000 draws, got {k}")));
    }
    let mut rng = stream.rng();
    let (pairs, _, _) = posterior_pairs(y_a, y_b, k, &mut rng)?;
    let wins = pairs.iter().filter(|&&(a, b)| a > b).count();
    Ok(wins as f64 / k as f64)
}

fn posterior_pairs<R: Rng + ?Sized>(
    y_a: &BinaryEvalVector,
    y_b: &BinaryEvalVector,
    k: u32,
    rng: &mut R,
) -> Result<(Vec<(f64, f64)>, Beta<f64>, Beta<f64>)> {
    let post = |y: &BinaryEvalVector| {
        let s = y.successes() as f64;
        let f = y.len() as f64 - s;
        Beta::new(1.0 + s, 1.0 + f)
            .map_err(|e| Error::Domain(format!("invalid Beta posterior: {e}")))
    };
    let dist_a = post(y_a)?;
    let dist_b = post(y_b)?;
    let pairs = (0..k).map(|_| (dist_a.sample(rng), dist_b.sample(rng))).collect();
    Ok((pairs, dist_a, dist_b))
}

/// Exact odds-ratio interval by inverting Fisher's conditional test.
///
/// The two-sided test doubles the smaller noncentral-hypergeometric tail,
/// so the interval endpoints solve `P(X ≥ x; ψ) = α/2` and
/// `P(X ≤ x; ψ) = α/2` on the fixed-margins 2×2 table. When the observed
/// count sits at an edge of the conditional support the corresponding side
/// is unbounded (0 or +∞) and flagged.
pub fn fisher_exact_or_interval(
    y_a: &BinaryEvalVector,
    y_b: &BinaryEvalVector,
    level: f64,
) -> Result<Interval> {
    let alpha = check_level(level)?;
    if y_a.is_empty() || y_b.is_empty() {
        return Err(Error::EmptyData("Fisher interval needs outcomes for both models"));
    }
    let na = y_a.len() as i64;
    let nb = y_b.len() as i64;
    let m = (y_a.successes() + y_b.successes()) as i64;
    let x = y_a.successes() as i64;

    let lo = 0.max(m - nb);
    let hi = na.min(m);
    // Log hypergeometric coefficients over the conditional support.
    let log_coeff: Vec<f64> = (lo..=hi)
        .map(|i| ln_choose(na as f64, i as f64) + ln_choose(nb as f64, (m - i) as f64))
        .collect();
    let x_idx = (x - lo) as usize;

    // P(X <= x; psi) and P(X >= x; psi) under log-odds log_psi.
    let tails = |log_psi: f64| -> (f64, f64) {
        let mut terms: Vec<f64> =
            log_coeff.iter().enumerate().map(|(i, &lc)| lc + (lo + i as i64) as f64 * log_psi).collect();
        let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for t in &mut terms {
            *t = (*t - max).exp();
        }
        let total: f64 = terms.iter().sum();
        let lower: f64 = terms[..=x_idx].iter().sum::<f64>() / total;
        let upper: f64 = terms[x_idx..].iter().sum::<f64>() / total;
        (lower, upper)
    };

    // Bisection on log psi; f must be monotone increasing.
    let bisect = |f: &dyn Fn(f64) -> f64| -> f64 {
        let (mut lo_psi, mut hi_psi) = (-80.0_f64, 80.0_f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo_psi + hi_psi);
            if f(mid) < 0.0 {
                lo_psi = mid;
            } else {
                hi_psi = mid;
            }
        }
        (0.5 * (lo_psi + hi_psi)).exp()
    };

    let lower = if x == lo {
        0.0
    } else {
        // P(X >= x; psi) grows with psi; find where it reaches alpha/2.
        bisect(&|lp| tails(lp).1 - alpha / 2.0)
    };
    let upper = if x == hi {
        f64::INFINITY
    } else {
        // P(X <= x; psi) falls with psi; negate for an increasing f.
        bisect(&|lp| alpha / 2.0 - tails(lp).0)
    };

    Ok(Interval::new(lower, upper, level, "fisher-or"))
}

/// Prior draws, cell probabilities, and normalized importance weights for
/// the paired bivariate-probit model.
#[derive(Debug, Clone)]
pub struct PairedImportanceSample {
    pub theta_a: Vec<f64>,
    pub theta_b: Vec<f64>,
    /// Normalized weights (zero for draws failing the cell-validity mask).
    pub weights: Vec<f64>,
    pub ess: f64,
    /// Draws with all four cell probabilities positive.
    pub n_valid: u32,
}

impl PairedImportanceSample {
    /// Weighted posterior mean of a per-draw function.
    pub fn weighted_mean(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(&v, &w)| v * w).sum()
    }
}

/// Runs the paired importance sampler: `k` draws of `(θ_A, θ_B, ρ)` from
/// the prior, weighted by the 2×2 cell likelihood.
///
/// Cell probabilities come from the bivariate-probit identities: with
/// `θ_V = P(both below threshold)` computed by the bivariate normal CDF,
/// `θ_S = θ_A + θ_B + θ_V − 1`, `θ_T = 1 − θ_B − θ_V`,
/// `θ_U = 1 − θ_A − θ_V`. Draws with any nonpositive cell get weight zero.
pub fn paired_importance_sample(
    data: &PairedEvalData,
    k: u32,
    stream: RngStream,
) -> Result<PairedImportanceSample> {
    if k < 1000 {
        return Err(Error::Domain(format!("paired importance sampler needs K >= 1000, got {k}")));
    }
    let (s, t, u, v) = data.counts();
    let (s, t, u, v) = (s as f64, t as f64, u as f64, v as f64);

    let uniform = Beta::new(1.0, 1.0).expect("Beta(1,1) is valid");
    let rho_hat_prior = Beta::new(4.0, 2.0).expect("Beta(4,2) is valid");

    let mut rng = stream.rng();
    let mut theta_a = Vec::with_capacity(k as usize);
    let mut theta_b = Vec::with_capacity(k as usize);
    let mut log_weights = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let ta: f64 = uniform.sample(&mut rng);
        let tb: f64 = uniform.sample(&mut rng);
        let rho = 2.0 * rho_hat_prior.sample(&mut rng) - 1.0;
        theta_a.push(ta);
        theta_b.push(tb);
        log_weights.push(paired_log_weight(ta, tb, rho, s, t, u, v).unwrap_or(f64::NEG_INFINITY));
    }

    let weights = normalize_log_weights(&log_weights, "paired 2x2 cell likelihood")?;
    let ess = effective_sample_size(&weights);
    let n_valid = weights.iter().filter(|&&w| w > 0.0).count() as u32;
    Ok(PairedImportanceSample { theta_a, theta_b, weights, ess, n_valid })
}

fn paired_log_weight(ta: f64, tb: f64, rho: f64, s: f64, t: f64, u: f64, v: f64) -> Option<f64> {
    if !(rho.abs() < 1.0) {
        return None;
    }
    let mu_a = std_normal_quantile(ta).ok()?;
    let mu_b = std_normal_quantile(tb).ok()?;
    let params = GaussianParams2D { mu1: mu_a, mu2: mu_b, rho };
    let theta_v = bivariate_normal_cdf(0.0, 0.0, &params).ok()?;
    let theta_s = ta + tb + theta_v - 1.0;
    let theta_t = 1.0 - tb - theta_v;
    let theta_u = 1.0 - ta - theta_v;
    if theta_s <= 0.0 || theta_t <= 0.0 || theta_u <= 0.0 || theta_v <= 0.0 {
        return None;
    }
    Some(s * theta_s.ln() + t * theta_t.ln() + u * theta_u.ln() + v * theta_v.ln())
}

/// Paired credible interval for θ_A − θ_B by weighted resampling of the
/// importance draws (default `k` = 10,000).
pub fn bayes_paired_diff(
    data: &PairedEvalData,
    level: f64,
    k: u32,
    stream: RngStream,
) -> Result<(Interval, PosteriorSamples)> {
    let (mut intervals, samples) = bayes_paired_diff_levels(data, &[level], k, stream)?;
    Ok((intervals.pop().expect("one level in, one interval out"), samples))
}

/// Multi-level form of [`bayes_paired_diff`].
pub fn bayes_paired_diff_levels(
    data: &PairedEvalData,
    levels: &[f64],
    k: u32,
    stream: RngStream,
) -> Result<(Vec<Interval>, PosteriorSamples)> {
    for &level in levels {
        check_level(level)?;
    }
    let is = paired_importance_sample(data, k, stream.substream(0))?;

    // Resample (θ_A, θ_B) pairs with replacement, then difference.
    let mut cumulative = Vec::with_capacity(is.weights.len());
    let mut acc = 0.0;
    for &w in &is.weights {
        acc += w;
        cumulative.push(acc);
    }
    let mut rng = stream.substream(1).rng();
    let diffs: Vec<f64> = (0..k)
        .map(|_| {
            let target: f64 = rng.random::<f64>() * acc;
            let idx = cumulative.partition_point(|&c| c < target).min(is.weights.len() - 1);
            is.theta_a[idx] - is.theta_b[idx]
        })
        .collect();

    let mut sorted = diffs.clone();
    sorted.sort_by(f64::total_cmp);
    let intervals = levels
        .iter()
        .map(|&level| {
            let mut interval = quantile_interval_sorted(&sorted, level, "bayes-paired");
            interval.diagnostics.ess = Some(is.ess);
            interval.diagnostics.draws = Some(k);
            interval
        })
        .collect();
    Ok((intervals, PosteriorSamples::resampled(diffs, is.ess)))
}

/// Weighted-quantile variant of [`bayes_paired_diff`]: same importance
/// draws, interval taken directly from the weighted empirical distribution
/// instead of resampling.
pub fn bayes_paired_diff_weighted(
    data: &PairedEvalData,
    level: f64,
    k: u32,
    stream: RngStream,
) -> Result<(Interval, PosteriorSamples)> {
    check_level(level)?;
    let is = paired_importance_sample(data, k, stream.substream(0))?;
    let mut pairs: Vec<(f64, f64)> = is
        .theta_a
        .iter()
        .zip(&is.theta_b)
        .zip(&is.weights)
        .filter(|&(_, &w)| w > 0.0)
        .map(|((&a, &b), &w)| (a - b, w))
        .collect();
    pairs.sort_by(|x, y| f64::total_cmp(&x.0, &y.0));

    let alpha = 1.0 - level;
    let lower = weighted_quantile_sorted(&pairs, alpha / 2.0);
    let upper = weighted_quantile_sorted(&pairs, 1.0 - alpha / 2.0);
    let mut interval = Interval::new(lower, upper, level, "bayes-paired-weighted");
    interval.diagnostics.ess = Some(is.ess);
    interval.diagnostics.draws = Some(k);

    let (draws, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    Ok((interval, PosteriorSamples::weighted(draws, weights)?))
}
