use std::path::{Path, PathBuf};

use crate::classify::{cross_validate, grid_search, ingest_dataset, LevelScheme, PipelineConfig};
use crate::cli::config::ConfigMap;
use crate::cli::output::OutputDir;
use crate::error::{Result, VsaError};

pub const BUNDLED_DATASETS: [&str; 5] = ["blobs", "rings", "stripes", "skewed", "waves"];

fn parse_scheme(raw: &str) -> Result<LevelScheme> {
    match raw {
        "block" => Ok(LevelScheme::BlockShift),
        "thermometric" => Ok(LevelScheme::Thermometric),
        other => Err(VsaError::Config(format!(
            "unknown scheme: {other} (expected block or thermometric)"
        ))),
    }
}

fn scheme_label(scheme: LevelScheme) -> &'static str {
    match scheme {
        LevelScheme::BlockShift => "block",
        LevelScheme::Thermometric => "thermometric",
    }
}

fn bundled_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/datasets/{name}.csv"))
}

fn dataset_paths(cfg: &ConfigMap) -> Result<Vec<(String, PathBuf)>> {
    match cfg.get("dataset") {
        Some(path) => {
            let p = PathBuf::from(path);
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".to_string());
            Ok(vec![(name, p)])
        }
        None => Ok(BUNDLED_DATASETS
            .iter()
            .map(|&name| (name.to_string(), bundled_path(name)))
            .collect()),
    }
}

/// Grid-search both level encodings over each dataset and report the best
/// cross-validated accuracy per (dataset, scheme) pair plus the parity gap
/// between the two schemes.
fn run_grid(cfg: &ConfigMap, out: &mut OutputDir, seed: u64) -> Result<()> {
    let folds = cfg.parse_or("folds", 5usize)?;
    let label_column = cfg.get("label_column").unwrap_or("label").to_string();
    let datasets = dataset_paths(cfg)?;

    let mut rows = Vec::new();
    let mut gap_rows = Vec::new();
    for (name, path) in &datasets {
        let dataset = ingest_dataset(path, &label_column)?;
        let mut means = Vec::new();
        for scheme in [LevelScheme::BlockShift, LevelScheme::Thermometric] {
            let (best, report, _grid) = grid_search(&dataset, scheme, folds, seed)?;
            means.push(report.mean);
            println!(
                "{name}/{}: accuracy {:.4} +- {:.4} (n={}, k={}, kappa={}, lambda={})",
                scheme_label(scheme),
                report.mean,
                report.std,
                best.n,
                best.k,
                best.kappa,
                best.lambda
            );
            rows.push(vec![
                name.clone(),
                scheme_label(scheme).to_string(),
                best.n.to_string(),
                best.k.to_string(),
                best.kappa.to_string(),
                format!("{:e}", best.lambda),
                format!("{:.4}", report.mean),
                format!("{:.4}", report.std),
            ]);
        }
        gap_rows.push(vec![name.clone(), format!("{:.4}", (means[0] - means[1]).abs())]);
    }
    out.write_csv(
        "classify_grid.csv",
        &["dataset", "scheme", "n", "k", "kappa", "lambda", "mean_accuracy", "std_accuracy"],
        &rows,
    )?;
    out.write_csv("classify_parity.csv", &["dataset", "accuracy_gap"], &gap_rows)?;
    Ok(())
}

/// Cross-validate a single explicit configuration on one dataset.
fn run_cv(cfg: &ConfigMap, out: &mut OutputDir, seed: u64) -> Result<()> {
    let path = cfg
        .get("dataset")
        .map(PathBuf::from)
        .ok_or_else(|| VsaError::Config("cv mode requires dataset=PATH".into()))?;
    let label_column = cfg.get("label_column").unwrap_or("label").to_string();
    let scheme = parse_scheme(cfg.get("scheme").unwrap_or("block"))?;
    let config = PipelineConfig {
        n: cfg.parse_or("n", 512usize)?,
        k: cfg.parse_or("k", 32usize)?,
        kappa: cfg.parse_or("kappa", 3.0f64)?,
        lambda: cfg.parse_or("lambda", 0.25f64)?,
        scheme,
        folds: cfg.parse_or("folds", 5usize)?,
        seed,
    };
    let dataset = ingest_dataset(&path, &label_column)?;
    let report = cross_validate(&dataset, &config)?;
    println!(
        "{}: accuracy {:.4} +- {:.4} over {} folds",
        dataset.name,
        report.mean,
        report.std,
        report.fold_accuracies.len()
    );
    out.write_csv(
        "classify_cv.csv",
        &["fold", "accuracy"],
        &report
            .fold_accuracies
            .iter()
            .enumerate()
            .map(|(i, a)| vec![i.to_string(), format!("{a:.4}")])
            .collect::<Vec<_>>(),
    )?;
    Ok(())
}

pub fn run(cfg: &ConfigMap, out: &mut OutputDir, seed: u64) -> Result<()> {
    match cfg.get("mode").unwrap_or("grid") {
        "grid" => run_grid(cfg, out, seed),
        "cv" => run_cv(cfg, out, seed),
        other => Err(VsaError::Config(format!("unknown classify mode: {other}"))),
    }
}
