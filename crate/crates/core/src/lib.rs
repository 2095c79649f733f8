//! Interval estimation for small-sample evaluation data.
//!
//! Benchmark-style evaluations routinely produce a handful of binary
//! outcomes per model, and the usual normal-approximation error bars behave
//! badly there: they collapse to zero width on all-correct runs and poke
//! outside `[0, 1]` near the boundaries. This crate implements the standard
//! alternatives side by side so their behaviour can be compared directly:
//!
//! - single-model intervals for IID binary outcomes ([`single`]): CLT,
//!   Student-t, Wilson score, Clopper-Pearson, percentile bootstrap, and
//!   Beta-posterior credible intervals;
//! - two-model comparisons ([`compare`]): independent and paired CLT
//!   intervals, exact Fisher odds-ratio intervals, posterior comparisons via
//!   conjugate sampling, and a paired importance sampler built on a
//!   bivariate-probit model of correlated outcomes;
//! - clustered outcomes ([`clustered`]): clustered standard errors and a
//!   Beta-Binomial hierarchical model fit by importance sampling;
//! - confusion-matrix metrics ([`confusion`]): F1 point estimates,
//!   delta-method intervals, Dirichlet-multinomial credible intervals
//!   (quantile and highest-density forms), and a multinomial bootstrap;
//! - a simulation harness ([`sim`]) that measures the empirical coverage of
//!   every method under known generative models, reproducibly and in
//!   parallel.
//!
//! All sampling goes through [`RngStream`], a splittable counter-based
//! stream: the same `(master_seed, stream_id)` produces the same draws on
//! every platform and under any thread count.

pub mod clustered;
pub mod compare;
pub mod confusion;
pub mod data;
mod error;
pub mod interval;
pub mod posterior;
pub mod sim;
pub mod single;
pub mod stats;

pub use error::{Error, Result};
pub use interval::{Diagnostics, Interval};
pub use posterior::{hdi, PosteriorSamples};
pub use stats::rng::RngStream;
