//! Independent numerical oracles used by the integration and acceptance
//! suites.
//!
//! Everything here is computed from first principles (closed-form
//! densities, direct products, brute-force quadrature or enumeration) and
//! deliberately avoids the library's own special-function and sampling
//! paths, so agreement between the two is evidence rather than tautology.

#![allow(dead_code)]

/// Composite Simpson rule with `n` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n >= 2 && n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut total = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        total += weight * f(a + h * i as f64);
    }
    total * h / 3.0
}

/// Adaptive Simpson integration to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64 + Copy>(
        f: F,
        a: f64,
        b: f64,
        fa: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fb, fm, whole, tol, 50)
}

/// Beta(a, b) CDF as a ratio of quadratures of the bare density, rescaled
/// to peak at 1 so concentrated shapes stay above the quadrature
/// tolerance. Safe for a, b >= 1 (no endpoint singularities).
pub fn beta_cdf_quadrature(x: f64, a: f64, b: f64) -> f64 {
    assert!(a >= 1.0 && b >= 1.0, "quadrature oracle needs a, b >= 1");
    let mode = if a + b > 2.0 { (a - 1.0) / (a + b - 2.0) } else { 0.5 };
    let log_peak = if mode > 0.0 && mode < 1.0 {
        (a - 1.0) * mode.ln() + (b - 1.0) * (1.0 - mode).ln()
    } else {
        0.0
    };
    let pdf = move |t: f64| {
        if t <= 0.0 || t >= 1.0 {
            if (t == 0.0 && a == 1.0) || (t == 1.0 && b == 1.0) {
                return (-log_peak).exp();
            }
            return 0.0;
        }
        ((a - 1.0) * t.ln() + (b - 1.0) * (1.0 - t).ln() - log_peak).exp()
    };
    let num = adaptive_simpson(pdf, 0.0, x, 1e-14);
    let den = adaptive_simpson(pdf, 0.0, 1.0, 1e-14);
    num / den
}

/// Student-t CDF for t >= 0 via quadrature of the density under the
/// substitution `x = √ν·tan(u)`, which maps the infinite tail onto
/// `[0, π/2]` exactly (valid for every ν ≥ 1, including Cauchy).
pub fn t_cdf_quadrature(t: f64, nu: f64) -> f64 {
    assert!(t >= 0.0);
    let pdf = move |u: f64| u.cos().powf(nu - 1.0);
    let half = adaptive_simpson(pdf, 0.0, std::f64::consts::FRAC_PI_2, 1e-13);
    let part = adaptive_simpson(pdf, 0.0, (t / nu.sqrt()).atan(), 1e-13);
    0.5 + 0.5 * part / half
}

/// Standard normal density.
fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal CDF by quadrature of the density.
pub fn std_normal_cdf_quadrature(x: f64) -> f64 {
    if x <= -9.0 {
        return 0.0;
    }
    adaptive_simpson(std_normal_pdf, -9.0, x, 1e-14)
}

/// Bivariate standard-normal CDF `P(Z1 <= x1, Z2 <= x2)` by 2D tensor
/// Simpson over the closed-form joint density. Accurate to ~1e-9 for
/// |rho| <= 0.9; the density ridge at extreme correlations needs
/// [`bvn_cdf_single_integral`] instead.
pub fn bvn_cdf_quadrature_2d(x1: f64, x2: f64, rho: f64) -> f64 {
    let norm = 1.0 / (2.0 * std::f64::consts::PI * (1.0 - rho * rho).sqrt());
    let inv = 1.0 / (2.0 * (1.0 - rho * rho));
    let lo = -9.0;
    let n = 1600;
    let inner = |z1: f64| {
        simpson(
            |z2: f64| norm * (-(z1 * z1 - 2.0 * rho * z1 * z2 + z2 * z2) * inv).exp(),
            lo,
            x2.min(9.0),
            n,
        )
    };
    simpson(inner, lo, x1.min(9.0), n)
}

/// Bivariate standard-normal CDF via the one-dimensional correlation
/// integral with the arcsine substitution:
/// `Φ2(h,k,ρ) = Φ(h)Φ(k) + (1/2π)∫_0^{asin ρ} exp(−(h²+k²−2hk·sinφ)/(2cos²φ)) dφ`.
/// Smooth for all |rho| < 1; used as the oracle at extreme correlations.
pub fn bvn_cdf_single_integral(h: f64, k: f64, rho: f64) -> f64 {
    let phi_h = std_normal_cdf_quadrature(h);
    let phi_k = std_normal_cdf_quadrature(k);
    let upper = rho.asin();
    if upper == 0.0 {
        return phi_h * phi_k;
    }
    let integrand = move |phi: f64| {
        let c = phi.cos();
        (-(h * h + k * k - 2.0 * h * k * phi.sin()) / (2.0 * c * c)).exp()
    };
    let (a, b) = if upper > 0.0 { (0.0, upper) } else { (upper, 0.0) };
    let sign = if upper > 0.0 { 1.0 } else { -1.0 };
    phi_h * phi_k + sign * simpson(integrand, a, b, 4000) / (2.0 * std::f64::consts::PI)
}

/// Exact binomial coefficient as f64 (exact for n <= 56).
pub fn choose(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut result = 1.0;
    for i in 0..k {
        result = result * (n - i) as f64 / (i + 1) as f64;
    }
    result
}

/// Exact binomial pmf by direct products.
pub fn binom_pmf(k: u64, n: u64, p: f64) -> f64 {
    choose(n, k) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// Beta-Binomial pmf by the lgamma-free product identity
/// `C(n,k)·∏(a+i)·∏(b+j)/∏(a+b+i)`, in log space for stability.
pub fn betabinom_pmf_product(k: u64, n: u64, a: f64, b: f64) -> f64 {
    let mut log_p = choose(n, k).ln();
    for i in 0..k {
        log_p += (a + i as f64).ln();
    }
    for j in 0..(n - k) {
        log_p += (b + j as f64).ln();
    }
    for i in 0..n {
        log_p -= (a + b + i as f64).ln();
    }
    log_p.exp()
}

/// Beta-Binomial pmf by quadrature: Binomial(k; n, θ) mixed over the Beta
/// density, as a ratio of quadratures (no normalizing constants needed).
pub fn betabinom_pmf_grid(k: u64, n: u64, a: f64, b: f64) -> f64 {
    let num = adaptive_simpson(
        move |t: f64| {
            binom_pmf(k, n, t) * t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0)
        },
        0.0,
        1.0,
        1e-14,
    );
    let den = adaptive_simpson(move |t: f64| t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0), 0.0, 1.0, 1e-14);
    num / den
}

/// Noncentral hypergeometric lower/upper tails at `x` on the 2×2 table
/// with row totals `na`, `nb` and success margin `m`, at odds ratio `psi`.
/// Direct products only.
pub fn noncentral_hypergeom_tails(na: u64, nb: u64, m: u64, x: u64, psi: f64) -> (f64, f64) {
    let lo = m.saturating_sub(nb);
    let hi = na.min(m);
    let log_psi = psi.ln();
    let terms: Vec<f64> = (lo..=hi)
        .map(|i| choose(na, i).ln() + choose(nb, m - i).ln() + i as f64 * log_psi)
        .collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = terms.iter().map(|&t| (t - max).exp()).collect();
    let total: f64 = scaled.iter().sum();
    let idx = (x - lo) as usize;
    let lower: f64 = scaled[..=idx].iter().sum::<f64>() / total;
    let upper: f64 = scaled[idx..].iter().sum::<f64>() / total;
    (lower, upper)
}

/// Posterior quantiles of θ for the clustered Beta-Binomial model on a
/// dense (θ, d) grid, using the product-form pmf. `qs` are cumulative
/// probabilities.
pub fn clustered_posterior_grid_quantiles(clusters: &[(u64, u64)], qs: &[f64]) -> Vec<f64> {
    let n_theta = 500;
    let n_d = 400;
    let d_max = 16.0; // Gamma(1,1) mass beyond 16 is ~1e-7.
    let thetas: Vec<f64> = (0..n_theta).map(|i| (i as f64 + 0.5) / n_theta as f64).collect();
    let ds: Vec<f64> = (0..n_d).map(|j| (j as f64 + 0.5) * d_max / n_d as f64).collect();

    let mut marginal = vec![0.0f64; n_theta];
    for (i, &theta) in thetas.iter().enumerate() {
        for &d in &ds {
            let a = d * theta;
            let b = d * (1.0 - theta);
            let mut like = (-d).exp(); // Gamma(1,1) prior density.
            for &(n, y) in clusters {
                like *= betabinom_pmf_product(y, n, a, b);
            }
            marginal[i] += like;
        }
    }
    let total: f64 = marginal.iter().sum();
    let mut out = Vec::with_capacity(qs.len());
    for &q in qs {
        let target = q * total;
        let mut acc = 0.0;
        let mut value = thetas[n_theta - 1];
        for (i, &w) in marginal.iter().enumerate() {
            acc += w;
            if acc >= target {
                value = thetas[i];
                break;
            }
        }
        out.push(value);
    }
    out
}

/// Posterior quantiles of θ_A − θ_B for the paired bivariate-probit model
/// on a dense (θ_A, θ_B, ρ̂) grid. Cell probabilities use the
/// single-integral bivariate CDF; the ρ̂ prior density Beta(4,2) is the
/// closed form `20·x³(1−x)`.
pub fn paired_posterior_grid_quantiles(s: u64, t: u64, u: u64, v: u64, qs: &[f64]) -> Vec<f64> {
    let (s, t, u, v) = (s as f64, t as f64, u as f64, v as f64);
    let n_theta = 80;
    let n_rho = 40;
    let thetas: Vec<f64> = (0..n_theta).map(|i| (i as f64 + 0.5) / n_theta as f64).collect();
    let rho_hats: Vec<f64> = (0..n_rho).map(|j| (j as f64 + 0.5) / n_rho as f64).collect();

    // Φ⁻¹ by bisection against the quadrature CDF.
    let quantile = |p: f64| -> f64 {
        let (mut lo, mut hi) = (-9.0f64, 9.0f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if std_normal_cdf_quadrature(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mus: Vec<f64> = thetas.iter().map(|&p| quantile(p)).collect();
    // Φ(−μ) per grid point; reused by every (θ_A, θ_B, ρ) node below.
    let phi_neg: Vec<f64> = mus.iter().map(|&m| std_normal_cdf_quadrature(-m)).collect();

    // Arcsine-substituted correlation integral with precomputed marginals.
    let bvn_low_left = |ia: usize, ib: usize, rho: f64| -> f64 {
        let (h, k) = (-mus[ia], -mus[ib]);
        let upper = rho.asin();
        let base = phi_neg[ia] * phi_neg[ib];
        if upper == 0.0 {
            return base;
        }
        let integrand = |phi: f64| {
            let c = phi.cos();
            (-(h * h + k * k - 2.0 * h * k * phi.sin()) / (2.0 * c * c)).exp()
        };
        let (a, b, sign) = if upper > 0.0 { (0.0, upper, 1.0) } else { (upper, 0.0, -1.0) };
        base + sign * simpson(integrand, a, b, 400) / (2.0 * std::f64::consts::PI)
    };

    let mut weighted: Vec<(f64, f64)> = Vec::with_capacity(n_theta * n_theta * n_rho);
    for (ia, &ta) in thetas.iter().enumerate() {
        for (ib, &tb) in thetas.iter().enumerate() {
            for &rh in &rho_hats {
                let rho = 2.0 * rh - 1.0;
                let prior_rho = 20.0 * rh.powi(3) * (1.0 - rh);
                let theta_v = bvn_low_left(ia, ib, rho);
                let theta_s = ta + tb + theta_v - 1.0;
                let theta_t = 1.0 - tb - theta_v;
                let theta_u = 1.0 - ta - theta_v;
                if theta_s <= 0.0 || theta_t <= 0.0 || theta_u <= 0.0 || theta_v <= 0.0 {
                    continue;
                }
                let log_like = s * theta_s.ln() + t * theta_t.ln() + u * theta_u.ln() + v * theta_v.ln();
                weighted.push((ta - tb, log_like.exp() * prior_rho));
            }
        }
    }
    weighted.sort_by(|a, b| f64::total_cmp(&a.0, &b.0));
    let total: f64 = weighted.iter().map(|&(_, w)| w).sum();
    qs.iter()
        .map(|&q| {
            let target = q * total;
            let mut acc = 0.0;
            for &(d, w) in &weighted {
                acc += w;
                if acc >= target {
                    return d;
                }
            }
            weighted.last().unwrap().0
        })
        .collect()
}

/// All 4-part compositions of `n` with their multinomial probabilities.
pub fn multinomial_compositions(n: u64, probs: [f64; 4]) -> Vec<([u64; 4], f64)> {
    let mut out = Vec::new();
    let log_p: Vec<f64> = probs.iter().map(|&p| p.ln()).collect();
    let log_fact = |m: u64| -> f64 { (1..=m).map(|i| (i as f64).ln()).sum() };
    for a in 0..=n {
        for b in 0..=(n - a) {
            for c in 0..=(n - a - b) {
                let d = n - a - b - c;
                let counts = [a, b, c, d];
                let mut lp = log_fact(n);
                for (i, &k) in counts.iter().enumerate() {
                    lp -= log_fact(k);
                    if k > 0 {
                        lp += k as f64 * log_p[i];
                    }
                }
                out.push((counts, lp.exp()));
            }
        }
    }
    out
}

/// Quantiles of the F1 pushforward of a Dirichlet posterior by dense grid
/// quadrature over the simplex (3 free coordinates). Feasible for
/// concentrated posteriors; `alphas` are the posterior concentrations.
pub fn dirichlet_f1_grid_quantiles(alphas: [f64; 4], qs: &[f64]) -> Vec<f64> {
    let n_grid = 120;
    let mut weighted: Vec<(f64, f64)> = Vec::new();
    // Integrate over (x=TP, y=FP, z=FN); the TN coordinate is 1−x−y−z.
    for ix in 0..n_grid {
        let x = (ix as f64 + 0.5) / n_grid as f64;
        for iy in 0..n_grid {
            let y = (iy as f64 + 0.5) / n_grid as f64;
            if x + y >= 1.0 {
                break;
            }
            for iz in 0..n_grid {
                let z = (iz as f64 + 0.5) / n_grid as f64;
                let w = 1.0 - x - y - z;
                if w <= 0.0 {
                    break;
                }
                let log_density = (alphas[0] - 1.0) * x.ln()
                    + (alphas[1] - 1.0) * y.ln()
                    + (alphas[2] - 1.0) * z.ln()
                    + (alphas[3] - 1.0) * w.ln();
                let denom = 2.0 * x + y + z;
                if denom > 0.0 {
                    weighted.push((2.0 * x / denom, log_density));
                }
            }
        }
    }
    let max = weighted.iter().map(|&(_, lw)| lw).fold(f64::NEG_INFINITY, f64::max);
    for pair in &mut weighted {
        pair.1 = (pair.1 - max).exp();
    }
    weighted.sort_by(|a, b| f64::total_cmp(&a.0, &b.0));
    let total: f64 = weighted.iter().map(|&(_, w)| w).sum();
    qs.iter()
        .map(|&q| {
            let target = q * total;
            let mut acc = 0.0;
            for &(f1, w) in &weighted {
                acc += w;
                if acc >= target {
                    return f1;
                }
            }
            weighted.last().unwrap().0
        })
        .collect()
}
