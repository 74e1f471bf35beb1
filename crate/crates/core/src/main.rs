use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use schottky_lab::cli::{report_error, run, Command, RunConfig};

/// Numerical experiments on Schottky groups: critical exponents, twisted
/// spectral gaps, correlation decay and holonomy statistics.
#[derive(Parser)]
#[command(name = "schottky-lab", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, env = "SCHOTTKY_LAB_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, env = "SCHOTTKY_LAB_OUT")]
    out: Option<PathBuf>,
    #[arg(long, env = "SCHOTTKY_LAB_SEED")]
    seed: Option<u64>,
    #[arg(long, env = "SCHOTTKY_LAB_DEPTH")]
    depth: Option<usize>,
    /// Worker threads, 0 for one per core.
    #[arg(long, env = "SCHOTTKY_LAB_THREADS")]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = match execute(&args) {
        Ok(code) => code,
        Err(err) => report_error(&err),
    };
    ExitCode::from(code as u8)
}

fn execute(args: &Args) -> schottky_lab::Result<i32> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &args.out {
        config.out = out.clone();
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(depth) = args.depth {
        config.depth = depth;
    }
    if let Some(threads) = args.threads {
        config.threads = threads;
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build_global()
        .map_err(|e| schottky_lab::Error::Config(e.to_string()))?;
    let summary = run(args.command, &config)?;
    for artifact in &summary.artifacts {
        eprintln!("wrote {}", config.out.join(&artifact.name).display());
    }
    Ok(summary.exit_code)
}
