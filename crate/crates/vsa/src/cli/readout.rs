use serde::Serialize;

use crate::cli::config::ConfigMap;
use crate::cli::output::OutputDir;
use crate::cs::{
    compress, lasso_solve, least_squares_refit, vsa_readout, LassoConfig, SamplingMatrix,
};
use crate::error::Result;
use crate::rng;

/// One row of the readout-vs-recovery sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ReadoutRow {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub trials: usize,
    /// RMS deviation of on-support readout coefficients from 1.
    pub readout_signal_rmse: f64,
    /// Standard deviation of off-support readout coefficients.
    pub crosstalk_std: f64,
    /// sqrt(K/N) reference for the crosstalk level.
    pub crosstalk_theory: f64,
    /// Fraction of trials where the lasso recovered the exact support.
    pub lasso_support_rate: f64,
    /// RMSE of refit coefficients over support-exact trials (NaN if none).
    pub lasso_rmse: f64,
}

/// Superpose K unit-coefficient atoms into an N-dimensional vector and
/// recover the coefficients two ways: the linear VSA readout and L1-penalized
/// sparse inference with a least-squares refit on the recovered support.
pub fn readout_sweep(
    ns: &[usize],
    m: usize,
    k: usize,
    trials: usize,
    lambda_scale: f64,
    seed: u64,
) -> Result<Vec<ReadoutRow>> {
    let mut rows = Vec::with_capacity(ns.len());
    for (ni, &n) in ns.iter().enumerate() {
        let mut signal_sq = 0.0;
        let mut cross_sq = 0.0;
        let mut cross_count = 0usize;
        let mut support_hits = 0usize;
        let mut lasso_sq = 0.0;
        let mut lasso_count = 0usize;
        for t in 0..trials {
            let trial_seed = rng::child_seed(seed, (ni * trials + t) as u64);
            let phi = SamplingMatrix::random_bipolar(n, m, trial_seed);
            let mut idx = rand::seq::index::sample(
                &mut rng::stream(rng::child_seed(trial_seed, 1)),
                m,
                k,
            )
            .into_vec();
            idx.sort_unstable();
            let truth: Vec<(usize, f64)> = idx.iter().map(|&i| (i, 1.0)).collect();
            let x = compress(&phi, &truth)?;

            let estimate = vsa_readout(&phi, &x)?;
            for (i, &v) in estimate.iter().enumerate() {
                if idx.binary_search(&i).is_ok() {
                    signal_sq += (v - 1.0) * (v - 1.0);
                } else {
                    cross_sq += v * v;
                    cross_count += 1;
                }
            }

            let res = lasso_solve(
                &phi,
                &x,
                &LassoConfig { lambda: lambda_scale * n as f64, nonnegative: true, ..Default::default() },
            )?;
            let mut found: Vec<usize> = res
                .coefficients
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > 1e-3)
                .map(|(i, _)| i)
                .collect();
            found.sort_unstable();
            if found == idx {
                support_hits += 1;
                for (_, v) in least_squares_refit(&phi, &x, &found)? {
                    lasso_sq += (v - 1.0) * (v - 1.0);
                    lasso_count += 1;
                }
            }
        }
        rows.push(ReadoutRow {
            n,
            m,
            k,
            trials,
            readout_signal_rmse: (signal_sq / (trials * k) as f64).sqrt(),
            crosstalk_std: (cross_sq / cross_count as f64).sqrt(),
            crosstalk_theory: (k as f64 / n as f64).sqrt(),
            lasso_support_rate: support_hits as f64 / trials as f64,
            lasso_rmse: if lasso_count > 0 {
                (lasso_sq / lasso_count as f64).sqrt()
            } else {
                f64::NAN
            },
        });
    }
    Ok(rows)
}

pub fn run(cfg: &ConfigMap, out: &mut OutputDir, seed: u64) -> Result<()> {
    let ns = cfg.parse_list_or("ns", &[32usize, 64, 96, 128, 160, 192, 224, 256])?;
    let m = cfg.parse_or("m", 1000usize)?;
    let k = cfg.parse_or("k", 6usize)?;
    let trials = cfg.parse_or("trials", 10usize)?;
    let lambda_scale = cfg.parse_or("lambda_scale", 0.1f64)?;

    let rows = readout_sweep(&ns, m, k, trials, lambda_scale, seed)?;
    out.write_csv(
        "readout.csv",
        &[
            "n",
            "m",
            "k",
            "trials",
            "readout_signal_rmse",
            "crosstalk_std",
            "crosstalk_theory",
            "lasso_support_rate",
            "lasso_rmse",
        ],
        &rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.m.to_string(),
                    r.k.to_string(),
                    r.trials.to_string(),
                    format!("{:.6}", r.readout_signal_rmse),
                    format!("{:.6}", r.crosstalk_std),
                    format!("{:.6}", r.crosstalk_theory),
                    format!("{:.4}", r.lasso_support_rate),
                    format!("{:.6}", r.lasso_rmse),
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    out.write_svg(
        "readout.svg",
        "Sparse-coefficient recovery vs dimension",
        &[
            (
                "readout crosstalk std".to_string(),
                rows.iter().map(|r| (r.n as f64, r.crosstalk_std)).collect(),
            ),
            (
                "lasso support rate".to_string(),
                rows.iter().map(|r| (r.n as f64, r.lasso_support_rate)).collect(),
            ),
        ],
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovery_sharp_vs_smooth() {
        let rows = readout_sweep(&[64, 128, 256], 1000, 6, 5, 0.1, 11).unwrap();
        // Crosstalk decays smoothly with n and tracks sqrt(k/n).
        for w in rows.windows(2) {
            assert!(w[1].crosstalk_std < w[0].crosstalk_std);
        }
        for r in &rows {
            assert!(
                r.crosstalk_std < 1.5 * r.crosstalk_theory
                    && r.crosstalk_std > r.crosstalk_theory / 1.5,
                "n={}: {} vs {}",
                r.n,
                r.crosstalk_std,
                r.crosstalk_theory
            );
        }
        // Lasso is essentially exact at n=256.
        let last = rows.last().unwrap();
        assert_eq!(last.lasso_support_rate, 1.0);
        assert!(last.lasso_rmse < 1e-3, "rmse {}", last.lasso_rmse);
    }
}
