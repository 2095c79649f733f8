//! Special functions, probability distributions, and seeded sampling.

pub mod normal;
pub mod rng;
pub mod sampling;
pub mod special;

pub use normal::{bivariate_normal_cdf, std_normal_cdf, std_normal_quantile, GaussianParams2D};
pub use rng::RngStream;
pub use sampling::{sample_beta, sample_binary, sample_dirichlet, sample_gamma};
pub use special::{beta_quantile, betabinom_logpmf, log_beta, log_gamma, reg_inc_beta, student_t_quantile};
