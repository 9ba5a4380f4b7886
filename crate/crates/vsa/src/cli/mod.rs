//! Command-line experiment runner.
//!
//! Each subcommand reads a flat key-value config (flags override file values,
//! file values override built-in defaults), runs one experiment, and writes
//! CSV tables, an optional SVG plot, and a JSON run manifest into the output
//! directory.

pub mod bindbench;
pub mod classify_cmd;
pub mod config;
pub mod fanin;
pub mod output;
pub mod readout;
pub mod reason_cmd;
pub mod rip_cmd;
pub mod sparsity;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cli::config::ConfigMap;
use crate::cli::output::OutputDir;
use crate::error::{Result, VsaError};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "VSA_OUT";

#[derive(Debug, Parser)]
#[command(name = "vsa", version, about = "Sparse vector-symbolic experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Flat key-value config file (`key = value` lines, `#` comments).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Random seed for the experiment (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory; defaults to $VSA_OUT/<experiment> or ./out/<experiment>.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Override a single config key, e.g. --set trials=100. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linear readout of compressed superpositions: correlation vs sparse recovery.
    Readout(CommonArgs),
    /// Restricted-isometry estimates for atomic, tensor-product, and protected-sum dictionaries.
    Rip(CommonArgs),
    /// Unbinding fidelity of four binding operators across density and superposition load.
    Bindbench(CommonArgs),
    /// Output-density statistics of sparsity-preserving binding.
    Sparsity(CommonArgs),
    /// Minimal tensor fan-in calibration across sparsity ratios and thresholds.
    Fanin(CommonArgs),
    /// Transform capacity grid and knowledge-base analogies.
    Reason(CommonArgs),
    /// Level-encoding classification: grid search or single cross-validation.
    Classify(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Readout(_) => "readout",
            Command::Rip(_) => "rip",
            Command::Bindbench(_) => "bindbench",
            Command::Sparsity(_) => "sparsity",
            Command::Fanin(_) => "fanin",
            Command::Reason(_) => "reason",
            Command::Classify(_) => "classify",
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Readout(c)
            | Command::Rip(c)
            | Command::Bindbench(c)
            | Command::Sparsity(c)
            | Command::Fanin(c)
            | Command::Reason(c)
            | Command::Classify(c) => c,
        }
    }
}

/// Build the effective config: file values first, then `--set` overrides.
fn effective_config(common: &CommonArgs) -> Result<ConfigMap> {
    let mut cfg = match &common.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::default(),
    };
    for raw in &common.overrides {
        let (key, value) = raw
            .split_once('=')
            .ok_or_else(|| VsaError::Config(format!("--set expects KEY=VALUE, got {raw}")))?;
        cfg.set(key.trim(), value.trim().to_string());
    }
    Ok(cfg)
}

fn default_out_dir(experiment: &str) -> PathBuf {
    match std::env::var_os(OUT_ENV) {
        Some(root) => PathBuf::from(root).join(experiment),
        None => PathBuf::from("out").join(experiment),
    }
}

/// Run one parsed command end to end and write its manifest.
pub fn run_command(command: &Command) -> Result<()> {
    let common = command.common();
    let cfg = effective_config(common)?;
    let seed = common.seed.unwrap_or(0);
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err(VsaError::Config("--threads must be >= 1".into()));
        }
        // Ignore the error if a global pool already exists (tests call this
        // function repeatedly in one process).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let dir = common.out.clone().unwrap_or_else(|| default_out_dir(command.name()));
    let mut out = OutputDir::create(&dir, command.name(), seed, cfg.entries().clone())?;
    match command {
        Command::Readout(_) => readout::run(&cfg, &mut out, seed)?,
        Command::Rip(_) => rip_cmd::run(&cfg, &mut out, seed)?,
        Command::Bindbench(_) => bindbench::run(&cfg, &mut out, seed)?,
        Command::Sparsity(_) => sparsity::run(&cfg, &mut out, seed)?,
        Command::Fanin(_) => fanin::run(&cfg, &mut out, seed)?,
        Command::Reason(_) => reason_cmd::run(&cfg, &mut out, seed)?,
        Command::Classify(_) => classify_cmd::run(&cfg, &mut out, seed)?,
    }
    let manifest = out.finish()?;
    println!("wrote {} outputs to {}", manifest.outputs.len(), dir.display());
    Ok(())
}

/// Exit code for a finished run: 0 success, 2 configuration problems,
/// 3 numerical or runtime failures.
pub fn exit_code(result: &Result<()>) -> i32 {
    match result {
        Ok(()) => 0,
        Err(VsaError::Config(_)) => 2,
        Err(_) => 3,
    }
}
