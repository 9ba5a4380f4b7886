use std::path::PathBuf;

use crate::cli::config::ConfigMap;
use crate::cli::output::OutputDir;
use crate::core::BlockKind;
use crate::error::{Result, VsaError};
use crate::reasoning::{answer_analogy, run_capacity_experiment, KnowledgeBase};
use crate::rng;

fn parse_kind(cfg: &ConfigMap) -> Result<BlockKind> {
    match cfg.get("kind").unwrap_or("binary") {
        "binary" => Ok(BlockKind::Binary),
        "phasor" => Ok(BlockKind::Phasor),
        other => Err(VsaError::Config(format!("unknown block kind: {other}"))),
    }
}

/// Transform-capacity grid: empirical vs predicted retrieval accuracy over
/// codeword length and record count.
fn run_capacity(cfg: &ConfigMap, out: &mut OutputDir, seed: u64) -> Result<()> {
    let ns = cfg.parse_list_or("ns", &[256usize, 512, 1024, 2048])?;
    let rs = cfg.parse_list_or("rs", &[2usize, 4, 8])?;
    let m_r = cfg.parse_or("fillers_per_role", 16usize)?;
    let block = cfg.parse_or("block_size", 16usize)?;
    let trials = cfg.parse_or("trials", 2000usize)?;
    let kind = parse_kind(cfg)?;

    let cells = run_capacity_experiment(&ns, &rs, m_r, block, trials, kind, seed)?;
    out.write_csv(
        "capacity.csv",
        &["n", "k", "r", "fillers_per_role", "trials", "hits", "empirical", "predicted"],
        &cells
            .iter()
            .map(|c| {
                vec![
                    c.n.to_string(),
                    c.k.to_string(),
                    c.r.to_string(),
                    c.m_r.to_string(),
                    c.trials.to_string(),
                    c.hits.to_string(),
                    format!("{:.4}", c.empirical),
                    format!("{:.4}", c.predicted),
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    let series: Vec<(String, Vec<(f64, f64)>)> = rs
        .iter()
        .map(|&r| {
            (
                format!("records={r}"),
                cells
                    .iter()
                    .filter(|c| c.r == r)
                    .map(|c| ((c.n as f64).log2(), c.empirical))
                    .collect(),
            )
        })
        .collect();
    out.write_svg("capacity.svg", "Transform retrieval accuracy vs log2 N", &series)?;
    Ok(())
}

/// Analogy demo over a JSON knowledge file: repeat the query across seeds and
/// report the top answer plus the rate at which the expected answer ranks first.
fn run_analogy(cfg: &ConfigMap, out: &mut OutputDir, seed: u64) -> Result<()> {
    let fixture = cfg
        .get("fixture")
        .map(PathBuf::from)
        .ok_or_else(|| VsaError::Config("analogy mode requires fixture=PATH".into()))?;
    let source = cfg.get("source").unwrap_or("usa").to_string();
    let target = cfg.get("target").unwrap_or("mexico").to_string();
    let probe = cfg.get("probe").unwrap_or("Dollar").to_string();
    let n = cfg.parse_or("n", 2048usize)?;
    let k = cfg.parse_or("k", 128usize)?;
    let kind = parse_kind(cfg)?;
    let repeats = cfg.parse_or("repeats", 100usize)?;

    let kb = KnowledgeBase::from_path(&fixture)?;
    let mut rows = Vec::new();
    let mut counts: std::collections::BTreeMap<String, usize> = std::collections::BTreeMap::new();
    for rep in 0..repeats {
        let schema = kb.build_schema(n, k, kind, rng::child_seed(seed, rep as u64))?;
        let ranked = answer_analogy(&kb, &schema, &source, &target, &probe)?;
        let (top, score) = &ranked[0];
        *counts.entry(top.clone()).or_default() += 1;
        rows.push(vec![rep.to_string(), top.clone(), format!("{score:.4}")]);
    }
    out.write_csv("analogy.csv", &["repeat", "top_answer", "score"], &rows)?;
    let mut by_count: Vec<(&String, &usize)> = counts.iter().collect();
    by_count.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    println!("analogy {probe} : {source} :: ? : {target}");
    for (answer, count) in by_count {
        println!("  {answer}: {count}/{repeats}");
    }
    Ok(())
}

pub fn run(cfg: &ConfigMap, out: &mut OutputDir, seed: u64) -> Result<()> {
    match cfg.get("mode").unwrap_or("capacity") {
        "capacity" => run_capacity(cfg, out, seed),
        "analogy" => run_analogy(cfg, out, seed),
        other => Err(VsaError::Config(format!("unknown reason mode: {other}"))),
    }
}
