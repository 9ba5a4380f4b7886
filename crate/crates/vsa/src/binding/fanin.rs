use statrs::function::beta::beta_reg;

use crate::error::{Result, VsaError};

/// P(d_l <= theta - 1) for the dendritic sum of an output with real-valued
/// fan-in `alpha`, where each sampled coincidence is active with probability
/// `K^2 / N^2`. For integer `alpha` this is the Binomial CDF; the regularized
/// incomplete beta extends it continuously:
/// `P(X <= k) = I_{1-p}(alpha - k, k + 1)`.
pub fn binomial_cdf_below(alpha: f64, p: f64, theta: u32) -> f64 {
    let k = (theta - 1) as f64;
    if alpha <= k {
        return 1.0;
    }
    beta_reg(alpha - k, k + 1.0, 1.0 - p)
}

/// Closed-form minimal fan-in for threshold 1:
/// `alpha* = ln(1 - K/N) / ln(1 - K^2/N^2)`.
pub fn min_fanin_closed_form_theta1(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(VsaError::InvalidParameter(format!("need 0 < K < N, got K={k}, N={n}")));
    }
    let ratio = k as f64 / n as f64;
    Ok((1.0 - ratio).ln() / (1.0 - ratio * ratio).ln())
}

/// Smallest real fan-in `alpha` such that `P(d_l < theta) <= 1 - K/N`,
/// together with its integer ceiling. Monotone nondecreasing in `theta`.
pub fn min_fanin(n: usize, k: usize, theta: u32) -> Result<(f64, usize)> {
    if k == 0 || k >= n {
        return Err(VsaError::InvalidParameter(format!("need 0 < K < N, got K={k}, N={n}")));
    }
    if theta == 0 {
        return Err(VsaError::InvalidParameter("theta must be >= 1".into()));
    }
    let ratio = k as f64 / n as f64;
    let p = ratio * ratio;
    let target = 1.0 - ratio;
    // binomial_cdf_below is strictly decreasing in alpha; bisect.
    let mut lo = (theta - 1) as f64;
    let mut hi = theta as f64;
    while binomial_cdf_below(hi, p, theta) > target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(VsaError::Numerical("fan-in bisection diverged".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if binomial_cdf_below(mid, p, theta) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let exact = 0.5 * (lo + hi);
    Ok((exact, exact.ceil() as usize))
}
