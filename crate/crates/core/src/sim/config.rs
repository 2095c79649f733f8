//! Simulation configuration: settings, data-generating priors, and the
//! experiment grid.

use rand::Rng;

use crate::error::{Error, Result};
use crate::sim::methods::MethodTag;
use crate::stats::sampling::{sample_beta, sample_dirichlet, sample_gamma};

/// Which generative scenario the experiment simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting {
    Iid,
    Clustered,
    IndependentPair,
    Paired,
    Confusion,
}

impl Setting {
    pub fn name(&self) -> &'static str {
        match self {
            Setting::Iid => "iid",
            Setting::Clustered => "clustered",
            Setting::IndependentPair => "independent_pair",
            Setting::Paired => "paired",
            Setting::Confusion => "confusion",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "iid" => Ok(Setting::Iid),
            "clustered" => Ok(Setting::Clustered),
            "independent_pair" => Ok(Setting::IndependentPair),
            "paired" => Ok(Setting::Paired),
            "confusion" => Ok(Setting::Confusion),
            other => Err(Error::Config(format!(
                "unknown setting '{other}' (expected iid, clustered, independent_pair, paired, confusion)"
            ))),
        }
    }

    pub(crate) fn index(&self) -> u64 {
        match self {
            Setting::Iid => 0,
            Setting::Clustered => 1,
            Setting::IndependentPair => 2,
            Setting::Paired => 3,
            Setting::Confusion => 4,
        }
    }
}

/// Prior for a probability-valued parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarPrior {
    Beta { a: f64, b: f64 },
    Fixed(f64),
}

impl ScalarPrior {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        match *self {
            ScalarPrior::Beta { a, b } => sample_beta(a, b, rng),
            ScalarPrior::Fixed(v) => Ok(v),
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        match *self {
            ScalarPrior::Beta { a, b } if a > 0.0 && b > 0.0 => Ok(()),
            ScalarPrior::Fixed(v) if (0.0..=1.0).contains(&v) => Ok(()),
            _ => Err(Error::Config(format!("invalid prior for {name}: {self:?}"))),
        }
    }
}

/// Prior for the positive concentration parameter of the clustered model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DispersionPrior {
    Gamma { shape: f64, rate: f64 },
    Fixed(f64),
}

impl DispersionPrior {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        match *self {
            DispersionPrior::Gamma { shape, rate } => sample_gamma(shape, rate, rng),
            DispersionPrior::Fixed(v) => Ok(v),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            DispersionPrior::Gamma { shape, rate } if shape > 0.0 && rate > 0.0 => Ok(()),
            DispersionPrior::Fixed(v) if v > 0.0 => Ok(()),
            _ => Err(Error::Config(format!("invalid dispersion prior: {self:?}"))),
        }
    }
}

/// Prior for the confusion-category simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimplexPrior {
    Dirichlet([f64; 4]),
    Fixed([f64; 4]),
}

impl SimplexPrior {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<[f64; 4]> {
        match *self {
            SimplexPrior::Dirichlet(alphas) => {
                let v = sample_dirichlet(&alphas, rng)?;
                Ok([v[0], v[1], v[2], v[3]])
            }
            SimplexPrior::Fixed(theta) => Ok(theta),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SimplexPrior::Dirichlet(a) if a.iter().all(|&x| x > 0.0) => Ok(()),
            SimplexPrior::Fixed(t) => {
                if t.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
                    return Err(Error::Config(format!("fixed simplex has components outside [0,1]: {t:?}")));
                }
                if (t.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                    return Err(Error::Config(format!("fixed simplex does not sum to 1: {t:?}")));
                }
                Ok(())
            }
            _ => Err(Error::Config(format!("invalid simplex prior: {self:?}"))),
        }
    }
}

/// Data-generating priors for every setting; only the fields relevant to
/// the configured setting are used. Defaults are the uniform priors the
/// inference methods assume, so the default configuration is matched-prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataPrior {
    pub theta: ScalarPrior,
    pub theta_a: ScalarPrior,
    pub theta_b: ScalarPrior,
    /// Correlation is `2·ρ̂ − 1` with `ρ̂` drawn from this prior.
    pub rho_hat: ScalarPrior,
    pub dispersion: DispersionPrior,
    pub confusion: SimplexPrior,
}

impl Default for DataPrior {
    fn default() -> Self {
        Self {
            theta: ScalarPrior::Beta { a: 1.0, b: 1.0 },
            theta_a: ScalarPrior::Beta { a: 1.0, b: 1.0 },
            theta_b: ScalarPrior::Beta { a: 1.0, b: 1.0 },
            rho_hat: ScalarPrior::Beta { a: 4.0, b: 2.0 },
            dispersion: DispersionPrior::Gamma { shape: 1.0, rate: 1.0 },
            confusion: SimplexPrior::Dirichlet([1.0, 1.0, 1.0, 1.0]),
        }
    }
}

/// Parameters drawn once per replication from the data prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DrawnParams {
    Iid { theta: f64 },
    Clustered { theta: f64, dispersion: f64 },
    Pair { theta_a: f64, theta_b: f64 },
    Paired { theta_a: f64, theta_b: f64, rho: f64 },
    Confusion { theta: [f64; 4] },
}

impl DataPrior {
    pub fn sample<R: Rng + ?Sized>(&self, setting: Setting, rng: &mut R) -> Result<DrawnParams> {
        Ok(match setting {
            Setting::Iid => DrawnParams::Iid { theta: self.theta.sample(rng)? },
            Setting::Clustered => DrawnParams::Clustered {
                theta: self.theta.sample(rng)?,
                dispersion: self.dispersion.sample(rng)?,
            },
            Setting::IndependentPair => DrawnParams::Pair {
                theta_a: self.theta_a.sample(rng)?,
                theta_b: self.theta_b.sample(rng)?,
            },
            Setting::Paired => DrawnParams::Paired {
                theta_a: self.theta_a.sample(rng)?,
                theta_b: self.theta_b.sample(rng)?,
                rho: 2.0 * self.rho_hat.sample(rng)? - 1.0,
            },
            Setting::Confusion => DrawnParams::Confusion { theta: self.confusion.sample(rng)? },
        })
    }
}

/// Monte Carlo draw counts per method family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DrawCounts {
    /// Conjugate posterior sampling (comparisons, F1 pushforward).
    pub posterior: u32,
    /// Bootstrap resampling.
    pub bootstrap: u32,
    /// Importance sampling (clustered and paired models).
    pub importance: u32,
}

impl Default for DrawCounts {
    fn default() -> Self {
        Self { posterior: 2000, bootstrap: 10_000, importance: 10_000 }
    }
}

/// Full description of one coverage experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub setting: Setting,
    pub methods: Vec<MethodTag>,
    pub data_prior: DataPrior,
    /// Parameter draws from the data prior.
    pub n_param_draws: u32,
    /// Independent datasets per parameter draw and size.
    pub n_datasets_per_draw: u32,
    /// Dataset sizes N.
    pub sizes: Vec<u32>,
    /// Nominal coverage levels, strictly increasing in (0, 1).
    pub levels: Vec<f64>,
    pub master_seed: u64,
    /// Questions per cluster in the clustered setting (last cluster takes
    /// the remainder).
    pub cluster_size: u32,
    pub draw_counts: DrawCounts,
}

impl SimConfig {
    /// Defaults: the full experiment grid (100 draws × 200 datasets, sizes
    /// 3/10/30/100, 100 logit-spaced levels on [0.8, 0.995]) with the
    /// standard method set for the setting.
    pub fn new(setting: Setting) -> Self {
        Self {
            setting,
            methods: MethodTag::defaults_for(setting),
            data_prior: DataPrior::default(),
            n_param_draws: 100,
            n_datasets_per_draw: 200,
            sizes: vec![3, 10, 30, 100],
            levels: logit_level_grid(0.8, 0.995, 100),
            master_seed: 0,
            cluster_size: 5,
            draw_counts: DrawCounts::default(),
        }
    }

    /// Desk-scale preset: 25 parameter draws × 50 datasets.
    pub fn fast(mut self) -> Self {
        self.n_param_draws = 25;
        self.n_datasets_per_draw = 50;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("no methods configured".into()));
        }
        for tag in &self.methods {
            if !tag.supports(self.setting) {
                return Err(Error::Config(format!(
                    "method '{}' is not applicable to the {} setting",
                    tag.name(),
                    self.setting.name()
                )));
            }
        }
        if self.n_param_draws == 0 || self.n_datasets_per_draw == 0 {
            return Err(Error::Config("draw and dataset counts must be at least 1".into()));
        }
        if self.sizes.is_empty() {
            return Err(Error::Config("at least one dataset size is required".into()));
        }
        let min_n = self.methods.iter().map(|m| m.min_n()).max().unwrap_or(1);
        for &n in &self.sizes {
            if n == 0 {
                return Err(Error::Config("dataset sizes must be positive".into()));
            }
            if n < min_n {
                return Err(Error::Config(format!(
                    "size N={n} is below the minimum N={min_n} required by a configured method"
                )));
            }
        }
        if self.levels.is_empty() {
            return Err(Error::Config("at least one coverage level is required".into()));
        }
        for pair in self.levels.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::Config("levels must be strictly increasing".into()));
            }
        }
        if self.levels.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
            return Err(Error::Config("levels must lie in (0, 1)".into()));
        }
        if self.setting == Setting::Clustered && self.cluster_size == 0 {
            return Err(Error::Config("cluster size must be positive".into()));
        }

        self.data_prior.theta.validate("theta")?;
        self.data_prior.theta_a.validate("theta_a")?;
        self.data_prior.theta_b.validate("theta_b")?;
        self.data_prior.rho_hat.validate("rho_hat")?;
        self.data_prior.dispersion.validate()?;
        self.data_prior.confusion.validate()?;
        if self.setting == Setting::Clustered {
            // The per-cluster Beta(dθ, d(1−θ)) needs θ strictly interior.
            if let ScalarPrior::Fixed(v) = self.data_prior.theta {
                if !(v > 0.0 && v < 1.0) {
                    return Err(Error::Config(format!(
                        "clustered setting needs fixed theta strictly inside (0, 1), got {v}"
                    )));
                }
            }
        }
        if self.setting == Setting::Confusion {
            if let SimplexPrior::Fixed(t) = self.data_prior.confusion {
                if 2.0 * t[0] + t[1] + t[2] <= 0.0 {
                    return Err(Error::Config(
                        "fixed confusion simplex makes the true F1 undefined".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Cluster layout for a dataset of `n` questions.
    pub fn cluster_sizes(&self, n: u32) -> Vec<u32> {
        let size = self.cluster_size.max(1);
        let mut remaining = n;
        let mut out = Vec::new();
        while remaining > 0 {
            let take = size.min(remaining);
            out.push(take);
            remaining -= take;
        }
        out
    }
}

/// `count` levels equispaced on the logit scale between `min` and `max`
/// inclusive.
pub fn logit_level_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && min > 0.0 && max < 1.0 && min < max);
    let logit = |p: f64| (p / (1.0 - p)).ln();
    let (lo, hi) = (logit(min), logit(max));
    (0..count)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / (count as f64 - 1.0);
            1.0 / (1.0 + (-t).exp())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_grid_spans_requested_range() {
        let grid = logit_level_grid(0.8, 0.995, 100);
        assert_eq!(grid.len(), 100);
        assert!((grid[0] - 0.8).abs() < 1e-12);
        assert!((grid[99] - 0.995).abs() < 1e-12);
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn validate_catches_incompatible_method() {
        let mut config = SimConfig::new(Setting::Iid);
        config.methods.push(MethodTag::BayesClustered);
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("not applicable"));
    }

    #[test]
    fn validate_catches_bad_levels_and_sizes() {
        let mut config = SimConfig::new(Setting::Iid);
        config.levels = vec![0.9, 0.85];
        assert!(config.validate().is_err());

        let mut config = SimConfig::new(Setting::Iid);
        config.sizes = vec![0];
        assert!(config.validate().is_err());

        // t interval needs N >= 2.
        let mut config = SimConfig::new(Setting::Iid);
        config.sizes = vec![1];
        assert!(config.validate().is_err());
    }

    #[test]
    fn cluster_layout_covers_n() {
        let config = SimConfig::new(Setting::Clustered);
        assert_eq!(config.cluster_sizes(3), vec![3]);
        assert_eq!(config.cluster_sizes(10), vec![5, 5]);
        assert_eq!(config.cluster_sizes(12), vec![5, 5, 2]);
        assert_eq!(config.cluster_sizes(100).iter().sum::<u32>(), 100);
    }

    #[test]
    fn default_config_is_valid_for_every_setting() {
        for setting in [
            Setting::Iid,
            Setting::Clustered,
            Setting::IndependentPair,
            Setting::Paired,
            Setting::Confusion,
        ] {
            SimConfig::new(setting).validate().unwrap();
        }
    }
}
