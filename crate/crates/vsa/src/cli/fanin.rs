use rayon::prelude::*;
use serde::Serialize;

use crate::binding::{
    min_fanin, min_fanin_closed_form_theta1, sptp_bind, SamplingTensor, TensorMode,
};
use crate::cli::config::ConfigMap;
use crate::cli::output::OutputDir;
use crate::core::{SparseKind, SparseVector};
use crate::error::{Result, VsaError};
use crate::rng;

#[derive(Debug, Clone, Serialize)]
pub struct FaninRow {
    pub n: usize,
    pub k: usize,
    pub theta: u32,
    pub alpha_exact: f64,
    pub alpha_ceil: usize,
    /// Closed form for threshold 1; NaN for other thresholds.
    pub alpha_closed_form: f64,
    /// Monte-Carlo fraction of active outputs when binding two random
    /// K-sparse binary vectors with a tensor whose per-output fan-in is
    /// randomized between floor and ceiling so that it averages
    /// `alpha_exact`. Rounding everything up to `alpha_ceil` would bias the
    /// density high at dense ratios.
    pub empirical_density: f64,
    pub trials: usize,
}

/// Minimal tensor fan-in needed to keep the bound vector's expected density
/// at K/N, swept over sparsity ratios and thresholds, with a Monte-Carlo
/// check of the resulting output density.
pub fn fanin_sweep(
    n: usize,
    ratios: &[f64],
    thetas: &[u32],
    trials: usize,
    seed: u64,
) -> Result<Vec<FaninRow>> {
    let mut rows = Vec::new();
    for (ri, &ratio) in ratios.iter().enumerate() {
        let k = (ratio * n as f64).round() as usize;
        if k == 0 || k >= n {
            return Err(VsaError::InvalidParameter(format!(
                "ratio {ratio} gives K={k} outside 0 < K < N={n}"
            )));
        }
        for (ti, &theta) in thetas.iter().enumerate() {
            let (alpha_exact, alpha_ceil) = min_fanin(n, k, theta)?;
            let closed = if theta == 1 {
                min_fanin_closed_form_theta1(n, k)?
            } else {
                f64::NAN
            };
            let cell_seed = rng::child_seed(seed, (ri * thetas.len() + ti) as u64);
            let tensor =
                SamplingTensor::build_real_fanin(n, alpha_exact, TensorMode::Random, cell_seed)?;
            let active: usize = (0..trials)
                .into_par_iter()
                .map(|t| -> Result<usize> {
                    let ts = rng::child_seed(cell_seed, 1 + t as u64);
                    let a = SparseVector::random(n, k, SparseKind::Binary, rng::child_seed(ts, 0))?;
                    let b = SparseVector::random(n, k, SparseKind::Binary, rng::child_seed(ts, 1))?;
                    Ok(sptp_bind(&a, &b, &tensor, theta)?.l0())
                })
                .try_reduce(|| 0usize, |x, y| Ok(x + y))?;
            rows.push(FaninRow {
                n,
                k,
                theta,
                alpha_exact,
                alpha_ceil,
                alpha_closed_form: closed,
                empirical_density: active as f64 / (trials * n) as f64,
                trials,
            });
        }
    }
    Ok(rows)
}

pub fn run(cfg: &ConfigMap, out: &mut OutputDir, seed: u64) -> Result<()> {
    let n = cfg.parse_or("n", 1000usize)?;
    let ratios = cfg.parse_list_or(
        "ratios",
        &[0.02f64, 0.05, 0.1, 0.2, 0.3, 0.5],
    )?;
    let thetas = cfg.parse_list_or("thetas", &[1u32, 2, 3])?;
    let trials = cfg.parse_or("trials", 200usize)?;

    let rows = fanin_sweep(n, &ratios, &thetas, trials, seed)?;
    out.write_csv(
        "fanin.csv",
        &[
            "n",
            "k",
            "theta",
            "alpha_exact",
            "alpha_ceil",
            "alpha_closed_form",
            "empirical_density",
            "trials",
        ],
        &rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.k.to_string(),
                    r.theta.to_string(),
                    format!("{:.6}", r.alpha_exact),
                    r.alpha_ceil.to_string(),
                    format!("{:.6}", r.alpha_closed_form),
                    format!("{:.6}", r.empirical_density),
                    r.trials.to_string(),
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    let series: Vec<(String, Vec<(f64, f64)>)> = thetas
        .iter()
        .map(|&theta| {
            (
                format!("theta={theta}"),
                rows.iter()
                    .filter(|r| r.theta == theta)
                    .map(|r| (r.k as f64 / r.n as f64, r.alpha_exact))
                    .collect(),
            )
        })
        .collect();
    out.write_svg("fanin.svg", "Minimal fan-in vs sparsity ratio", &series)?;
    Ok(())
}
