//! Seeded draws from the distributions used by the generative models.
//!
//! Thin validated wrappers over `rand_distr`; every function takes the
//! caller's generator so draws stay tied to an explicit [`RngStream`].
//!
//! [`RngStream`]: crate::stats::rng::RngStream

use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma};

use crate::error::{Error, Result};

/// One draw from Beta(a, b).
pub fn sample_beta<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> Result<f64> {
    let dist = Beta::new(a, b)
        .map_err(|e| Error::Domain(format!("invalid Beta({a}, {b}) parameters: {e}")))?;
    Ok(dist.sample(rng))
}

/// One draw from Gamma(shape, rate).
///
/// Rate parameterization: the mean is `shape / rate`. (At shape = rate = 1
/// the rate and scale conventions coincide.)
pub fn sample_gamma<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> Result<f64> {
    if !(rate > 0.0) {
        return Err(Error::Domain(format!("gamma rate must be positive, got {rate}")));
    }
    let dist = Gamma::new(shape, 1.0 / rate)
        .map_err(|e| Error::Domain(format!("invalid Gamma({shape}, rate={rate}): {e}")))?;
    Ok(dist.sample(rng))
}

/// One draw from Dirichlet(alphas), via normalized Gamma draws.
pub fn sample_dirichlet<R: Rng + ?Sized>(alphas: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    if alphas.len() < 2 {
        return Err(Error::Domain("Dirichlet needs at least two concentration parameters".into()));
    }
    if alphas.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::Domain(format!("Dirichlet concentrations must be positive: {alphas:?}")));
    }
    let mut draws: Vec<f64> = alphas
        .iter()
        .map(|&a| sample_gamma(a, 1.0, rng))
        .collect::<Result<_>>()?;
    let total: f64 = draws.iter().sum();
    if !(total > 0.0) {
        // Possible only when every Gamma draw underflows to zero.
        return Err(Error::DegeneratePosterior(
            "all Dirichlet component draws underflowed to zero".into(),
        ));
    }
    for d in &mut draws {
        *d /= total;
    }
    Ok(draws)
}

/// One Bernoulli(p) outcome as 0/1.
pub fn sample_binary<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Result<u8> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("Bernoulli p must be in [0, 1], got {p}")));
    }
    Ok(u8::from(rng.random::<f64>() < p))
}
