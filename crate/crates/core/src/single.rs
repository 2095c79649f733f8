//! Interval methods for a single model on IID binary outcomes.

use crate::data::BinaryEvalVector;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::stats::rng::RngStream;
use crate::stats::{beta_quantile, std_normal_quantile, student_t_quantile};

pub(crate) fn check_level(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("confidence level must be in (0, 1), got {level}")));
    }
    Ok(1.0 - level)
}

/// `z_{α/2}`: the upper quantile used by two-sided normal intervals.
pub(crate) fn z_value(level: f64) -> Result<f64> {
    let alpha = check_level(level)?;
    std_normal_quantile(1.0 - alpha / 2.0)
}

/// Normal-approximation interval `θ̂ ± z·sqrt(θ̂(1−θ̂)/N)`.
///
/// Returned unclamped so its small-sample pathologies (zero width on
/// all-correct data, bounds outside `[0, 1]`) stay observable; use
/// [`Interval::clamped_to_unit`] for a clamped copy.
pub fn clt_interval(y: &BinaryEvalVector, level: f64) -> Result<Interval> {
    let z = z_value(level)?;
    if y.is_empty() {
        return Err(Error::EmptyData("CLT interval needs at least one outcome"));
    }
    let n = y.len() as f64;
    let theta = y.mean();
    let half = z * (theta * (1.0 - theta) / n).sqrt();
    Ok(Interval::new(theta - half, theta + half, level, "clt").flag_unit_range())
}

/// Student-t interval with the unbiased sample variance.
pub fn t_interval(y: &BinaryEvalVector, level: f64) -> Result<Interval> {
    let alpha = check_level(level)?;
    if y.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "t interval needs a sample variance (N >= 2), got N = {}",
            y.len()
        )));
    }
    let n = y.len() as f64;
    let theta = y.mean();
    // For 0/1 data Σy² = Σy, so S² = N·θ̂(1−θ̂)/(N−1).
    let sample_var = n * theta * (1.0 - theta) / (n - 1.0);
    let t = student_t_quantile(1.0 - alpha / 2.0, y.len() as u32 - 1)?;
    let half = t * (sample_var / n).sqrt();
    Ok(Interval::new(theta - half, theta + half, level, "t").flag_unit_range())
}

/// Wilson score interval.
///
/// The center is `(θ̂ + z²/2N)/(1 + z²/N)`, not θ̂, which keeps the interval
/// inside `[0, 1]` and off zero width.
pub fn wilson_interval(y: &BinaryEvalVector, level: f64) -> Result<Interval> {
    let z = z_value(level)?;
    if y.is_empty() {
        return Err(Error::EmptyData("Wilson interval needs at least one outcome"));
    }
    let n = y.len() as f64;
    let theta = y.mean();
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (theta + z2 / (2.0 * n)) / denom;
    let half = (z / (2.0 * n)) / denom * (4.0 * n * theta * (1.0 - theta) + z2).sqrt();
    // Mathematically inside [0, 1]; the clamp only removes rounding spill.
    Ok(Interval::new((center - half).clamp(0.0, 1.0), (center + half).clamp(0.0, 1.0), level, "wilson"))
}

/// Clopper-Pearson exact interval via Beta quantiles.
pub fn clopper_pearson_interval(y: &BinaryEvalVector, level: f64) -> Result<Interval> {
    let alpha = check_level(level)?;
    if y.is_empty() {
        return Err(Error::EmptyData("Clopper-Pearson interval needs at least one outcome"));
    }
    let n = y.len() as u64;
    let s = y.successes();
    let lower = if s == 0 {
        0.0
    } else {
        beta_quantile(alpha / 2.0, s as f64, (n - s) as f64 + 1.0)?
    };
    let upper = if s == n {
        1.0
    } else {
        beta_quantile(1.0 - alpha / 2.0, s as f64 + 1.0, (n - s) as f64)?
    };
    Ok(Interval::new(lower, upper, level, "clopper-pearson"))
}

/// Percentile bootstrap interval over `k` resampled means.
pub fn bootstrap_interval(y: &BinaryEvalVector, level: f64, k: u32, stream: RngStream) -> Result<Interval> {
    Ok(bootstrap_intervals(y, &[level], k, stream)?.pop().expect("one level in, one interval out"))
}

/// Bootstrap intervals at several levels from one set of `k` resamples.
///
/// Resampling N binary outcomes with replacement makes the resampled sum a
/// `Binomial(N, θ̂)` draw, so each replicate costs one binomial sample
/// instead of N Bernoulli draws; the resampling distribution is identical.
/// Quantile ties are resolved by linear interpolation between order
/// statistics.
pub fn bootstrap_intervals(
    y: &BinaryEvalVector,
    levels: &[f64],
    k: u32,
    stream: RngStream,
) -> Result<Vec<Interval>> {
    for &level in levels {
        check_level(level)?;
    }
    if y.is_empty() {
        return Err(Error::EmptyData("bootstrap needs at least one outcome"));
    }
    if k < 100 {
        return Err(Error::Domain(format!("bootstrap needs K >= 100 resamples, got {k}")));
    }
    let n = y.len() as u64;
    let theta = y.mean();

    // Tally of resampled sums; the full sorted sample of size k is implied.
    let mut tally = vec![0u32; n as usize + 1];
    if theta == 0.0 {
        tally[0] = k;
    } else if theta == 1.0 {
        tally[n as usize] = k;
    } else {
        let binom = rand_distr::Binomial::new(n, theta)
            .map_err(|e| Error::Domain(format!("invalid binomial resample: {e}")))?;
        let mut rng = stream.rng();
        for _ in 0..k {
            let s = rand_distr::Distribution::sample(&binom, &mut rng);
            tally[s as usize] += 1;
        }
    }

    let mut cumulative = Vec::with_capacity(tally.len());
    let mut acc = 0u64;
    for &c in &tally {
        acc += u64::from(c);
        cumulative.push(acc);
    }
    let order_stat = |rank: u64| -> f64 {
        let idx = cumulative.partition_point(|&c| c <= rank);
        idx as f64 / n as f64
    };
    let quantile = |p: f64| -> f64 {
        let h = (k as f64 - 1.0) * p;
        let lo = h.floor() as u64;
        let frac = h - lo as f64;
        let a = order_stat(lo);
        if frac == 0.0 {
            return a;
        }
        let b = order_stat(lo + 1);
        a + frac * (b - a)
    };

    Ok(levels
        .iter()
        .map(|&level| {
            let alpha = 1.0 - level;
            let mut interval = Interval::new(quantile(alpha / 2.0), quantile(1.0 - alpha / 2.0), level, "bootstrap");
            interval.diagnostics.draws = Some(k);
            interval
        })
        .collect())
}

/// Credible interval from the Beta(1+S, 1+N−S) posterior under a uniform
/// prior. Defined for empty data (the prior interval).
pub fn bayes_beta_interval(y: &BinaryEvalVector, level: f64) -> Result<Interval> {
    let alpha = check_level(level)?;
    let s = y.successes() as f64;
    let f = (y.len() as u64 - y.successes()) as f64;
    let lower = beta_quantile(alpha / 2.0, 1.0 + s, 1.0 + f)?;
    let upper = beta_quantile(1.0 - alpha / 2.0, 1.0 + s, 1.0 + f)?;
    Ok(Interval::new(lower, upper, level, "bayes-beta"))
}
