use serde::Serialize;

use crate::cli::config::ConfigMap;
use crate::cli::output::OutputDir;
use crate::cs::{ensemble_rip, BoxDot, SamplingMatrix, TestVectorShape};
use crate::error::Result;
use crate::rng;

#[derive(Debug, Clone, Serialize)]
pub struct RipRow {
    pub n: usize,
    pub sparsity: usize,
    /// Atomic dictionary (m^2 unit-norm random columns), iid-sparse vectors.
    pub delta_atomic: f64,
    /// Pairwise-product dictionary, outer-product-shaped vectors.
    pub delta_tensor: f64,
    /// Pairwise-product dictionary, one-slice (protected-sum-shaped) vectors.
    pub delta_psum: f64,
}

/// Worst-case restricted-isometry constants over an ensemble of dictionary
/// draws, per dictionary construction, for a sweep of dimensions.
pub fn rip_sweep(
    ns: &[usize],
    m: usize,
    sparsity: usize,
    members: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<RipRow>> {
    let mut rows = Vec::with_capacity(ns.len());
    for (ni, &n) in ns.iter().enumerate() {
        let base = rng::child_seed(seed, ni as u64);
        let delta_atomic = ensemble_rip(
            |s| SamplingMatrix::random_bipolar(n, m * m, s).unit_columns(),
            members,
            sparsity,
            TestVectorShape::IidSparse,
            0,
            trials,
            rng::child_seed(base, 0),
        )?
        .delta;
        // The pairwise-product dictionary is evaluated through a closure
        // that owns both factors per member.
        let boxdot_delta = |shape: TestVectorShape, sub: u64| -> Result<f64> {
            let mut worst = 0.0f64;
            for e in 0..members {
                let member = rng::child_seed(rng::child_seed(base, sub), e as u64);
                let phi = SamplingMatrix::random_bipolar(n, m, rng::child_seed(member, 0));
                let psi = SamplingMatrix::random_bipolar(n, m, rng::child_seed(member, 1));
                let dict = BoxDot::new(&phi, &psi)?.unit_columns();
                let est = crate::cs::estimate_rip(
                    &dict,
                    sparsity,
                    shape,
                    m,
                    trials,
                    rng::child_seed(member, 2),
                )?;
                worst = worst.max(est.delta);
            }
            Ok(worst)
        };
        rows.push(RipRow {
            n,
            sparsity,
            delta_atomic,
            delta_tensor: boxdot_delta(TestVectorShape::OuterProduct, 1)?,
            delta_psum: boxdot_delta(TestVectorShape::Concatenation, 2)?,
        });
    }
    Ok(rows)
}

pub fn run(cfg: &ConfigMap, out: &mut OutputDir, seed: u64) -> Result<()> {
    let ns = cfg.parse_list_or("ns", &[16usize, 32, 64, 128, 256])?;
    let m = cfg.parse_or("m", 24usize)?;
    let sparsity = cfg.parse_or("sparsity", 4usize)?;
    let members = cfg.parse_or("members", 5usize)?;
    let trials = cfg.parse_or("trials", 2000usize)?;

    let rows = rip_sweep(&ns, m, sparsity, members, trials, seed)?;
    out.write_csv(
        "rip.csv",
        &["n", "sparsity", "delta_atomic", "delta_tensor", "delta_psum"],
        &rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.sparsity.to_string(),
                    format!("{:.6}", r.delta_atomic),
                    format!("{:.6}", r.delta_tensor),
                    format!("{:.6}", r.delta_psum),
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    out.write_svg(
        "rip.svg",
        "Worst-case RIP constant vs dimension",
        &[
            ("atomic".to_string(), rows.iter().map(|r| (r.n as f64, r.delta_atomic)).collect()),
            ("tensor".to_string(), rows.iter().map(|r| (r.n as f64, r.delta_tensor)).collect()),
            ("protected-sum".to_string(), rows.iter().map(|r| (r.n as f64, r.delta_psum)).collect()),
        ],
    )?;
    Ok(())
}
