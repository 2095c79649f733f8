//! Flat key-value simulation config files.
//!
//! One `key = value` pair per line, `#` comments, keys mapping 1:1 onto
//! the simulation configuration:
//!
//! ```text
//! setting = iid                  # iid | clustered | independent_pair | paired | confusion
//! methods = clt,wilson,cp,bayes  # optional; defaults per setting
//! profile = full                 # full (100×200) | fast (25×50)
//! n_param_draws = 100            # optional explicit override
//! n_datasets_per_draw = 200
//! sizes = 3,10,30,100
//! levels = 0.8:0.995:100         # logit-spaced grid, or an explicit list
//! master_seed = 0
//! cluster_size = 5
//! k_posterior = 2000
//! k_bootstrap = 10000
//! k_importance = 10000
//! theta_prior = beta(1,1)        # or fixed(0.7)
//! theta_a_prior = beta(1,1)
//! theta_b_prior = beta(1,1)
//! rho_hat_prior = beta(4,2)
//! d_prior = gamma(1,1)           # or fixed(2.0)
//! dirichlet_prior = 1,1,1,1      # or fixed(0.4,0.2,0.2,0.2)
//! ```

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use uq_core::sim::{
    logit_level_grid, DispersionPrior, MethodTag, ScalarPrior, Setting, SimConfig, SimplexPrior,
};

pub fn parse(text: &str, path: &Path) -> Result<SimConfig> {
    let mut pairs: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{} line {}: expected `key = value`", path.display(), idx + 1);
        };
        pairs.push((idx + 1, key.trim().to_string(), value.trim().to_string()));
    }

    let lookup = |key: &str| -> Option<&(usize, String, String)> {
        pairs.iter().find(|(_, k, _)| k == key)
    };
    for (i, (_, key, _)) in pairs.iter().enumerate() {
        if pairs[..i].iter().any(|(_, k, _)| k == key) {
            bail!("{}: duplicate key `{key}`", path.display());
        }
    }

    let setting_entry = lookup("setting")
        .ok_or_else(|| anyhow!("{}: missing required key `setting`", path.display()))?;
    let setting = Setting::parse(&setting_entry.2).map_err(|e| anyhow!("{e}"))?;

    let mut config = SimConfig::new(setting);
    for (line, key, value) in &pairs {
        let fail = |msg: String| anyhow!("{} line {line}: {msg}", path.display());
        match key.as_str() {
            "setting" => {}
            "methods" => {
                config.methods = value
                    .split(',')
                    .map(|name| MethodTag::parse(name.trim(), setting).map_err(|e| fail(e.to_string())))
                    .collect::<Result<_>>()?;
            }
            "profile" => match value.as_str() {
                "fast" => {
                    config.n_param_draws = 25;
                    config.n_datasets_per_draw = 50;
                }
                "full" => {
                    config.n_param_draws = 100;
                    config.n_datasets_per_draw = 200;
                }
                other => return Err(fail(format!("unknown profile `{other}`"))),
            },
            "n_param_draws" => {
                config.n_param_draws =
                    value.parse().map_err(|_| fail(format!("`{value}` is not a count")))?;
            }
            "n_datasets_per_draw" => {
                config.n_datasets_per_draw =
                    value.parse().map_err(|_| fail(format!("`{value}` is not a count")))?;
            }
            "sizes" => {
                config.sizes = value
                    .split(',')
                    .map(|v| v.trim().parse().map_err(|_| fail(format!("`{v}` is not a size"))))
                    .collect::<Result<_>>()?;
            }
            "levels" => {
                config.levels = parse_levels(value).map_err(|e| fail(e.to_string()))?;
            }
            "master_seed" => {
                config.master_seed =
                    value.parse().map_err(|_| fail(format!("`{value}` is not a seed")))?;
            }
            "cluster_size" => {
                config.cluster_size =
                    value.parse().map_err(|_| fail(format!("`{value}` is not a size")))?;
            }
            "k_posterior" => {
                config.draw_counts.posterior =
                    value.parse().map_err(|_| fail(format!("`{value}` is not a count")))?;
            }
            "k_bootstrap" => {
                config.draw_counts.bootstrap =
                    value.parse().map_err(|_| fail(format!("`{value}` is not a count")))?;
            }
            "k_importance" => {
                config.draw_counts.importance =
                    value.parse().map_err(|_| fail(format!("`{value}` is not a count")))?;
            }
            "theta_prior" => config.data_prior.theta = parse_scalar_prior(value).map_err(|e| fail(e.to_string()))?,
            "theta_a_prior" => {
                config.data_prior.theta_a = parse_scalar_prior(value).map_err(|e| fail(e.to_string()))?
            }
            "theta_b_prior" => {
                config.data_prior.theta_b = parse_scalar_prior(value).map_err(|e| fail(e.to_string()))?
            }
            "rho_hat_prior" => {
                config.data_prior.rho_hat = parse_scalar_prior(value).map_err(|e| fail(e.to_string()))?
            }
            "d_prior" => {
                config.data_prior.dispersion = parse_dispersion_prior(value).map_err(|e| fail(e.to_string()))?
            }
            "dirichlet_prior" => {
                config.data_prior.confusion = parse_simplex_prior(value).map_err(|e| fail(e.to_string()))?
            }
            other => return Err(fail(format!("unknown key `{other}`"))),
        }
    }

    config.validate().map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok(config)
}

fn parse_levels(value: &str) -> Result<Vec<f64>> {
    if let Some((min, rest)) = value.split_once(':') {
        let (max, count) = rest
            .split_once(':')
            .ok_or_else(|| anyhow!("level grid must be `min:max:count`"))?;
        let min: f64 = min.trim().parse().context("grid minimum")?;
        let max: f64 = max.trim().parse().context("grid maximum")?;
        let count: usize = count.trim().parse().context("grid count")?;
        if !(min > 0.0 && max < 1.0 && min < max && count >= 2) {
            bail!("level grid needs 0 < min < max < 1 and count >= 2");
        }
        Ok(logit_level_grid(min, max, count))
    } else {
        value
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| anyhow!("`{v}` is not a level")))
            .collect()
    }
}

fn parse_args(value: &str, name: &str) -> Result<Vec<f64>> {
    let inner = value
        .strip_prefix(name)
        .and_then(|rest| rest.trim().strip_prefix('('))
        .and_then(|rest| rest.trim_end().strip_suffix(')'))
        .ok_or_else(|| anyhow!("expected `{name}(...)`, got `{value}`"))?;
    inner
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| anyhow!("`{v}` is not a number")))
        .collect()
}

fn parse_scalar_prior(value: &str) -> Result<ScalarPrior> {
    if value.starts_with("beta") {
        let args = parse_args(value, "beta")?;
        if args.len() != 2 {
            bail!("beta prior needs two parameters");
        }
        Ok(ScalarPrior::Beta { a: args[0], b: args[1] })
    } else if value.starts_with("fixed") {
        let args = parse_args(value, "fixed")?;
        if args.len() != 1 {
            bail!("fixed prior needs one value");
        }
        Ok(ScalarPrior::Fixed(args[0]))
    } else {
        bail!("expected `beta(a,b)` or `fixed(v)`, got `{value}`");
    }
}

fn parse_dispersion_prior(value: &str) -> Result<DispersionPrior> {
    if value.starts_with("gamma") {
        let args = parse_args(value, "gamma")?;
        if args.len() != 2 {
            bail!("gamma prior needs two parameters");
        }
        Ok(DispersionPrior::Gamma { shape: args[0], rate: args[1] })
    } else if value.starts_with("fixed") {
        let args = parse_args(value, "fixed")?;
        if args.len() != 1 {
            bail!("fixed prior needs one value");
        }
        Ok(DispersionPrior::Fixed(args[0]))
    } else {
        bail!("expected `gamma(shape,rate)` or `fixed(v)`, got `{value}`");
    }
}

fn parse_simplex_prior(value: &str) -> Result<SimplexPrior> {
    let to_array = |args: Vec<f64>| -> Result<[f64; 4]> {
        if args.len() != 4 {
            bail!("simplex prior needs four values");
        }
        Ok([args[0], args[1], args[2], args[3]])
    };
    if value.starts_with("fixed") {
        Ok(SimplexPrior::Fixed(to_array(parse_args(value, "fixed")?)?))
    } else {
        let args = value
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| anyhow!("`{v}` is not a number")))
            .collect::<Result<Vec<f64>>>()?;
        Ok(SimplexPrior::Dirichlet(to_array(args)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn parse_str(text: &str) -> Result<SimConfig> {
        parse(text, &PathBuf::from("test.cfg"))
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let config = parse_str("setting = iid\n").unwrap();
        assert_eq!(config.n_param_draws, 100);
        assert_eq!(config.sizes, vec![3, 10, 30, 100]);
        assert_eq!(config.levels.len(), 100);
    }

    #[test]
    fn full_config_round_trip() {
        let config = parse_str(
            "# experiment\nsetting = clustered\nmethods = clt,clustered-clt,bayes-clustered\n\
             profile = fast\nsizes = 10,30\nlevels = 0.9,0.95\nmaster_seed = 42\n\
             cluster_size = 3\nk_importance = 5000\ntheta_prior = beta(10,10)\nd_prior = fixed(2.0)\n",
        )
        .unwrap();
        assert_eq!(config.n_param_draws, 25);
        assert_eq!(config.methods.len(), 3);
        assert_eq!(config.cluster_size, 3);
        assert_eq!(config.draw_counts.importance, 5000);
        assert_eq!(config.data_prior.theta, ScalarPrior::Beta { a: 10.0, b: 10.0 });
        assert_eq!(config.data_prior.dispersion, DispersionPrior::Fixed(2.0));
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_str("setting = iid\nbogus_key = 3\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = parse_str("setting = iid\nlevels = 0.9;0.95\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn rejects_duplicates_and_unknown_settings() {
        assert!(parse_str("setting = iid\nsetting = paired\n").is_err());
        assert!(parse_str("setting = martian\n").is_err());
        assert!(parse_str("sizes = 3\n").is_err()); // missing setting
    }

    #[test]
    fn grid_levels_expand() {
        let config = parse_str("setting = iid\nlevels = 0.8:0.995:100\n").unwrap();
        assert_eq!(config.levels.len(), 100);
        assert!((config.levels[0] - 0.8).abs() < 1e-12);
        assert!((config.levels[99] - 0.995).abs() < 1e-12);
    }
}
