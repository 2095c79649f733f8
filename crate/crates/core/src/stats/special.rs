//! Gamma/Beta special functions and the quantiles built on them.

use crate::error::{Error, Result};

/// Lanczos coefficients, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 8] = [
    676.5203681218851,
    -1259.1392167224028,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507343278686905,
    -0.13857109526572012,
    9.984_369_578_019_572e-6,
    1.5056327351493116e-7,
];

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_8; // ln(2π)/2

/// Natural log of the Gamma function for `x > 0`.
///
/// Lanczos approximation with reflection below 1/2; relative error is below
/// 1e-13 across `[1e-3, 1e6]`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1−x) = π / sin(πx). Safe here since 0 < x < 1/2.
        let sin_pi_x = (std::f64::consts::PI * x).sin();
        return std::f64::consts::PI.ln() - sin_pi_x.ln() - log_gamma_unchecked(1.0 - x);
    }
    let z = x - 1.0;
    let mut series = 0.999_999_999_999_809_93;
    for (i, c) in LANCZOS.iter().enumerate() {
        series += c / (z + i as f64 + 1.0);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_2PI_HALF + (z + 0.5) * t.ln() - t + series.ln()
}

/// Natural log of the Beta function `B(a, b)`.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("log_beta requires a, b > 0, got a={a}, b={b}")));
    }
    Ok(log_beta_unchecked(a, b))
}

pub(crate) fn log_beta_unchecked(a: f64, b: f64) -> f64 {
    log_gamma_unchecked(a) + log_gamma_unchecked(b) - log_gamma_unchecked(a + b)
}

/// Regularized incomplete beta function `I_x(a, b)`.
///
/// Continued-fraction evaluation (modified Lentz), switching to the
/// symmetric form `1 − I_{1−x}(b, a)` where the fraction converges faster.
/// Absolute error is below 1e-13 for the parameter ranges produced by
/// Beta posteriors on count data.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("reg_inc_beta requires a, b > 0, got a={a}, b={b}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("reg_inc_beta requires x in [0, 1], got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        Ok(1.0 - inc_beta_cf(1.0 - x, b, a))
    } else {
        Ok(inc_beta_cf(x, a, b))
    }
}

/// Lentz continued fraction for `I_x(a, b)`, valid on the fast-converging
/// side of the symmetry switch.
fn inc_beta_cf(x: f64, a: f64, b: f64) -> f64 {
    const MAX_ITER: usize = 500;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;

    let ln_prefix = a * x.ln() + b * (1.0 - x).ln() - log_beta_unchecked(a, b);
    let prefix = ln_prefix.exp() / a;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=MAX_ITER {
        let m_f = m as f64;
        let m2 = 2.0 * m_f;

        // Even step.
        let aa = m_f * (b - m_f) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        // Odd step.
        let aa = -(a + m_f) * (qab + m_f) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;

        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    (prefix * h).clamp(0.0, 1.0)
}

/// Quantile of the Beta(a, b) distribution at probability `p`.
///
/// Newton iteration on `I_x(a, b) − p` with a maintained bisection bracket;
/// converges to |I_x − p| ≤ 1e-12, well inside the 1e-10 contract.
pub fn beta_quantile(p: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("beta_quantile requires a, b > 0, got a={a}, b={b}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("beta_quantile requires p in (0, 1), got {p}")));
    }

    let ln_beta = log_beta_unchecked(a, b);
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    // Mean as the starting point; Newton corrects quickly and the bracket
    // guards the extreme-shape cases.
    let mut x = (a / (a + b)).clamp(1e-300, 1.0 - 1e-16);

    for _ in 0..200 {
        let f = reg_inc_beta(x, a, b)? - p;
        if f.abs() <= 1e-12 {
            return Ok(x);
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let ln_pdf = (a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln() - ln_beta;
        let step = f / ln_pdf.exp();
        let newton = x - step;
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(x)
}

/// Quantile of Student's t-distribution with `nu` degrees of freedom.
///
/// Inverted through the incomplete beta relation
/// `P(|T| > t) = I_{ν/(ν+t²)}(ν/2, 1/2)`.
pub fn student_t_quantile(p: f64, nu: u32) -> Result<f64> {
    if nu < 1 {
        return Err(Error::Domain(format!("student_t_quantile requires nu >= 1, got {nu}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("student_t_quantile requires p in (0, 1), got {p}")));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let tail = 2.0 * p.min(1.0 - p);
    let nu_f = f64::from(nu);
    let x = beta_quantile(tail, nu_f / 2.0, 0.5)?;
    let t = (nu_f * (1.0 - x) / x).sqrt();
    Ok(if p < 0.5 { -t } else { t })
}

/// Log probability mass of the Beta-Binomial distribution.
///
/// `k` successes in `n` trials with mixing distribution Beta(a, b).
pub fn betabinom_logpmf(k: u64, n: u64, a: f64, b: f64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("betabinom_logpmf requires k <= n, got k={k}, n={n}")));
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "betabinom_logpmf requires a, b > 0, got a={a}, b={b}"
        )));
    }
    let (k, n) = (k as f64, n as f64);
    Ok(ln_choose(n, k) + log_beta_unchecked(k + a, n - k + b) - log_beta_unchecked(a, b))
}

pub(crate) fn ln_choose(n: f64, k: f64) -> f64 {
    log_gamma_unchecked(n + 1.0) - log_gamma_unchecked(k + 1.0) - log_gamma_unchecked(n - k + 1.0)
}
