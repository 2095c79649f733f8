//! Generative models for the five simulation settings.

use rand_distr::{Distribution, StandardNormal};

use crate::confusion::multinomial_resample;
use crate::data::{BinaryEvalVector, ClusteredEvalData, ConfusionCounts, PairedEvalData};
use crate::error::{Error, Result};
use crate::stats::normal::std_normal_quantile;
use crate::stats::rng::RngStream;
use crate::stats::sampling::{sample_beta, sample_binary};

/// N Bernoulli(θ) outcomes.
pub fn gen_iid(theta: f64, n: u32, stream: RngStream) -> Result<BinaryEvalVector> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Domain(format!("theta must be in [0, 1], got {theta}")));
    }
    let mut rng = stream.rng();
    let outcomes: Vec<u8> =
        (0..n).map(|_| sample_binary(theta, &mut rng)).collect::<Result<_>>()?;
    BinaryEvalVector::new(outcomes)
}

/// Per-cluster success rates `θ_t ~ Beta(dθ, d(1−θ))`, then Binomial
/// success counts. Large `d` pins every cluster near θ; small `d` spreads
/// them out.
pub fn gen_clustered(
    theta: f64,
    dispersion: f64,
    cluster_sizes: &[u32],
    stream: RngStream,
) -> Result<ClusteredEvalData> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!(
            "clustered generator needs theta strictly inside (0, 1), got {theta}"
        )));
    }
    if !(dispersion > 0.0) {
        return Err(Error::Domain(format!("dispersion must be positive, got {dispersion}")));
    }
    if cluster_sizes.is_empty() {
        return Err(Error::EmptyData("clustered generator needs at least one cluster"));
    }
    let mut rng = stream.rng();
    let a = dispersion * theta;
    let b = dispersion * (1.0 - theta);
    let mut clusters = Vec::with_capacity(cluster_sizes.len());
    for &nt in cluster_sizes {
        if nt == 0 {
            return Err(Error::Domain("cluster sizes must be positive".into()));
        }
        let theta_t = sample_beta(a, b, &mut rng)?;
        let binom = rand_distr::Binomial::new(u64::from(nt), theta_t.clamp(0.0, 1.0))
            .map_err(|e| Error::Domain(format!("invalid per-cluster binomial: {e}")))?;
        clusters.push((u64::from(nt), binom.sample(&mut rng)));
    }
    ClusteredEvalData::new(clusters)
}

/// Correlated paired outcomes by thresholding a bivariate Gaussian at zero.
///
/// Means `Φ⁻¹(θ_A), Φ⁻¹(θ_B)` with unit variances and correlation `rho`
/// give marginal success probabilities exactly `θ_A` and `θ_B`.
pub fn gen_paired(
    theta_a: f64,
    theta_b: f64,
    rho: f64,
    n: u32,
    stream: RngStream,
) -> Result<PairedEvalData> {
    if !(theta_a > 0.0 && theta_a < 1.0 && theta_b > 0.0 && theta_b < 1.0) {
        return Err(Error::Domain(format!(
            "paired generator needs success probabilities strictly inside (0, 1), got ({theta_a}, {theta_b})"
        )));
    }
    if !(rho.abs() < 1.0) {
        return Err(Error::Domain(format!("correlation must satisfy |rho| < 1, got {rho}")));
    }
    let mu_a = std_normal_quantile(theta_a)?;
    let mu_b = std_normal_quantile(theta_b)?;
    let cross = (1.0 - rho * rho).sqrt();

    let mut rng = stream.rng();
    let mut y_a = Vec::with_capacity(n as usize);
    let mut y_b = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let e1: f64 = StandardNormal.sample(&mut rng);
        let e2: f64 = StandardNormal.sample(&mut rng);
        let a = mu_a + e1;
        let b = mu_b + rho * e1 + cross * e2;
        y_a.push(u8::from(a > 0.0));
        y_b.push(u8::from(b > 0.0));
    }
    PairedEvalData::from_vectors(BinaryEvalVector::new(y_a)?, BinaryEvalVector::new(y_b)?)
}

/// Multinomial confusion counts from category probabilities.
pub fn gen_confusion(theta: &[f64; 4], n: u32, stream: RngStream) -> Result<ConfusionCounts> {
    if theta.iter().any(|&t| !(0.0..=1.0).contains(&t)) {
        return Err(Error::Domain(format!("category probabilities must be in [0, 1]: {theta:?}")));
    }
    if (theta.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("category probabilities must sum to 1: {theta:?}")));
    }
    let mut rng = stream.rng();
    let counts = multinomial_resample(u64::from(n), theta, &mut rng);
    Ok(ConfusionCounts::new(counts[0], counts[1], counts[2], counts[3]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iid_degenerate_thetas() {
        let zeros = gen_iid(0.0, 50, RngStream::new(51, 0)).unwrap();
        assert_eq!(zeros.successes(), 0);
        let ones = gen_iid(1.0, 50, RngStream::new(51, 1)).unwrap();
        assert_eq!(ones.successes(), 50);
    }

    #[test]
    fn iid_law_of_large_numbers() {
        let y = gen_iid(0.5, 100_000, RngStream::new(51, 2)).unwrap();
        assert!((y.mean() - 0.5).abs() < 0.005);
    }

    #[test]
    fn clustered_rejects_boundary_theta() {
        assert!(gen_clustered(0.0, 1.0, &[5], RngStream::new(52, 0)).is_err());
        assert!(gen_clustered(1.0, 1.0, &[5], RngStream::new(52, 0)).is_err());
    }

    #[test]
    fn clustered_large_dispersion_pins_cluster_rates() {
        let d = 1e6;
        let theta = 0.3;
        let sizes = vec![1u32; 10_000];
        let data = gen_clustered(theta, d, &sizes, RngStream::new(52, 1)).unwrap();
        // Pooled mean over many singleton clusters approaches θ.
        assert!((data.pooled_mean() - theta).abs() < 0.02);

        // Variance of per-cluster rates shrinks like θ(1−θ)/d.
        let big = gen_clustered(theta, d, &[50_000, 50_000], RngStream::new(52, 2)).unwrap();
        let rates: Vec<f64> =
            big.clusters().iter().map(|&(n, y)| y as f64 / n as f64).collect();
        for r in rates {
            assert!((r - theta).abs() < 0.01);
        }
    }

    #[test]
    fn clustered_low_dispersion_is_u_shaped() {
        // d=1, θ=0.5 mixes like Beta(0.5, 0.5): variance θ(1−θ)/(d+1) = 1/8.
        let sizes = vec![1u32; 20_000];
        let data = gen_clustered(0.5, 1.0, &sizes, RngStream::new(52, 3)).unwrap();
        let mean = data.pooled_mean();
        assert!((mean - 0.5).abs() < 0.02);
        // Second moment of θ_t for Beta(0.5,0.5) is 3/8; binary outcomes of
        // singleton clusters have E[y²] = E[θ_t], so check via pair counts
        // on clusters of two instead.
        let data2 = gen_clustered(0.5, 1.0, &vec![2u32; 20_000], RngStream::new(52, 4)).unwrap();
        let both: f64 = data2.clusters().iter().filter(|&&(_, y)| y == 2).count() as f64 / 20_000.0;
        // P(Y_t = 2) = E[θ_t²] = 3/8 for Beta(0.5, 0.5).
        assert!((both - 0.375).abs() < 0.02, "P(both)={both}");
    }

    #[test]
    fn paired_marginals_and_independence() {
        let data = gen_paired(0.6, 0.9, 0.0, 100_000, RngStream::new(53, 0)).unwrap();
        assert!((data.y_a().mean() - 0.6).abs() < 0.005);
        assert!((data.y_b().mean() - 0.9).abs() < 0.005);

        // Sample correlation of the binary outcomes near zero at rho = 0.
        let (s, t, u, v) = data.counts();
        let n = data.n() as f64;
        let (pa, pb) = (data.y_a().mean(), data.y_b().mean());
        let cov = s as f64 / n - pa * pb;
        let corr = cov / (pa * (1.0 - pa) * pb * (1.0 - pb)).sqrt();
        assert!(corr.abs() < 0.02, "corr={corr}");
        assert_eq!(s + t + u + v, data.n());
    }

    #[test]
    fn paired_cell_probability_matches_bivariate_cdf() {
        use crate::stats::normal::{bivariate_normal_cdf, GaussianParams2D};
        // θ_A=0.6, θ_B=0.9, ρ=0.7: P(both correct) from the cell identity
        // θ_S = θ_A + θ_B + θ_V − 1.
        let (ta, tb, rho) = (0.6, 0.9, 0.7);
        let params = GaussianParams2D {
            mu1: std_normal_quantile(ta).unwrap(),
            mu2: std_normal_quantile(tb).unwrap(),
            rho,
        };
        let theta_v = bivariate_normal_cdf(0.0, 0.0, &params).unwrap();
        let theta_s = ta + tb + theta_v - 1.0;

        let data = gen_paired(ta, tb, rho, 200_000, RngStream::new(53, 1)).unwrap();
        let (s, _, _, _) = data.counts();
        let empirical = s as f64 / data.n() as f64;
        assert!((empirical - theta_s).abs() < 0.005, "{empirical} vs {theta_s}");
    }

    #[test]
    fn confusion_counts_sum_and_degenerate_corner() {
        let c = gen_confusion(&[1.0, 0.0, 0.0, 0.0], 25, RngStream::new(54, 0)).unwrap();
        assert_eq!(c.as_array(), [25, 0, 0, 0]);

        let c = gen_confusion(&[0.25, 0.25, 0.25, 0.25], 100_000, RngStream::new(54, 1)).unwrap();
        assert_eq!(c.total(), 100_000);
        let bound = 3.0 * (100_000.0_f64 * 3.0 / 16.0).sqrt();
        for &count in &c.as_array() {
            assert!((count as f64 - 25_000.0).abs() < bound);
        }
    }

    #[test]
    fn generators_are_reproducible() {
        let s = RngStream::new(55, 9);
        assert_eq!(gen_iid(0.4, 100, s).unwrap(), gen_iid(0.4, 100, s).unwrap());
        assert_eq!(
            gen_paired(0.5, 0.5, 0.3, 50, s).unwrap(),
            gen_paired(0.5, 0.5, 0.3, 50, s).unwrap()
        );
        assert_eq!(
            gen_confusion(&[0.4, 0.3, 0.2, 0.1], 60, s).unwrap(),
            gen_confusion(&[0.4, 0.3, 0.2, 0.1], 60, s).unwrap()
        );
    }
}
