use rayon::prelude::*;
use serde::Serialize;

use crate::binding::{min_fanin, sptp_bind, SamplingTensor, TensorMode};
use crate::cli::config::ConfigMap;
use crate::cli::output::OutputDir;
use crate::core::{SparseKind, SparseVector};
use crate::error::{Result, VsaError};
use crate::rng;

#[derive(Debug, Clone, Serialize)]
pub struct SparsityRow {
    pub op: &'static str,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub mean_l0: f64,
    pub std_l0: f64,
    /// Coefficient of variation std/mean.
    pub cov: f64,
}

/// Output-density statistics of the two sparsity-preserving binders at
/// fixed K/N. Blockwise binding is exactly K-sparse by construction; the
/// thresholded tensor projection is K-sparse in expectation with spread
/// shrinking as K grows.
pub fn sparsity_stats(ks: &[usize], ratio: f64, trials: usize, seed: u64) -> Result<Vec<SparsityRow>> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(VsaError::InvalidParameter("ratio must be in (0, 1)".into()));
    }
    let mut rows = Vec::new();
    for (ki, &k) in ks.iter().enumerate() {
        let n = (k as f64 / ratio).round() as usize;
        let alpha = min_fanin(n, k, 1)?.1;
        let tensor = SamplingTensor::build(
            n,
            alpha,
            TensorMode::Random,
            false,
            rng::child_seed(seed, ki as u64),
        )?;
        let l0s: Vec<usize> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let ts = rng::child_seed(rng::child_seed(seed, 1000 + ki as u64), t as u64);
                let a = SparseVector::random(n, k, SparseKind::Binary, rng::child_seed(ts, 0))?;
                let b = SparseVector::random(n, k, SparseKind::Binary, rng::child_seed(ts, 1))?;
                Ok(sptp_bind(&a, &b, &tensor, 1)?.l0())
            })
            .collect::<Result<Vec<usize>>>()?;
        let mean = l0s.iter().sum::<usize>() as f64 / trials as f64;
        let var = l0s.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / trials as f64;
        rows.push(SparsityRow {
            op: "sptp",
            n,
            k,
            trials,
            mean_l0: mean,
            std_l0: var.sqrt(),
            cov: var.sqrt() / mean,
        });
        // Blockwise binding output density is deterministic.
        rows.push(SparsityRow { op: "lcc", n, k, trials, mean_l0: k as f64, std_l0: 0.0, cov: 0.0 });
    }
    Ok(rows)
}

pub fn run(cfg: &ConfigMap, out: &mut OutputDir, seed: u64) -> Result<()> {
    let ks = cfg.parse_list_or("ks", &[20usize, 50, 100, 200])?;
    let ratio = cfg.parse_or("ratio", 0.1f64)?;
    let trials = cfg.parse_or("trials", 500usize)?;

    let rows = sparsity_stats(&ks, ratio, trials, seed)?;
    out.write_csv(
        "sparsity.csv",
        &["op", "n", "k", "trials", "mean_l0", "std_l0", "cov"],
        &rows
            .iter()
            .map(|r| {
                vec![
                    r.op.to_string(),
                    r.n.to_string(),
                    r.k.to_string(),
                    r.trials.to_string(),
                    format!("{:.4}", r.mean_l0),
                    format!("{:.4}", r.std_l0),
                    format!("{:.6}", r.cov),
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    out.write_svg(
        "sparsity.svg",
        "Output density spread vs K at fixed K/N",
        &[(
            "sptp cov".to_string(),
            rows.iter().filter(|r| r.op == "sptp").map(|r| (r.k as f64, r.cov)).collect(),
        )],
    )?;
    Ok(())
}
