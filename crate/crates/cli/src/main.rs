//! `qbk`: batch front-end for the benchmark toolkit.
//!
//! Subcommands: `generate | features | run | score | coverage | correlate`.
//! Fixed CSV column orders are documented in each subcommand's `--help`.

mod commands;
mod config;
mod suite;

use anyhow::Result;
use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "qbk",
    version,
    about = "Generate, profile, execute, and analyze quantum benchmark suites",
    long_about = "Generate scalable benchmark circuits, profile them with six \
                  hardware-agnostic features, execute them on a noisy shot-sampling \
                  simulator, and analyze suite coverage and feature-score correlation.\n\n\
                  The QBK_SEED environment variable overrides --seed."
)]
struct Cli {
    /// Suite configuration (TOML). Without it, the built-in default suite is
    /// used by generate/run/coverage.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed for instance generation and execution.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (default: ./qbk-out or the config's out_dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write instance directories: instance.json plus one .qasm per circuit.
    Generate,
    /// Profile .qasm files or generated instance directories.
    ///
    /// CSV columns: benchmark_id, family, qubits, depth, two_qubit_gates,
    /// communication, critical_depth, entanglement, parallelism, liveness,
    /// measurement. A features.json with the same rows is written next to
    /// the CSV when --out is set.
    Features {
        /// .qasm files, instance directories, or directories of instances.
        paths: Vec<PathBuf>,
    },
    /// Execute every (instance, backend, repetition) and append JSONL
    /// result records to <out>/results.jsonl.
    Run,
    /// Aggregate a results JSONL into a score table.
    ///
    /// CSV columns: benchmark_id, family, backend, mean_score, std_dev,
    /// repetitions.
    Score {
        /// Path to results.jsonl.
        results: PathBuf,
    },
    /// Convex-hull coverage volume of a feature table.
    Coverage {
        /// Features CSV produced by `qbk features`.
        features: Option<PathBuf>,
        /// Use the built-in synthetic suite (origin + six unit vectors).
        #[arg(long)]
        synthetic: bool,
        /// Monte-Carlo samples for non-simplex hulls.
        #[arg(long, default_value_t = qbk_core::analysis::DEFAULT_HULL_SAMPLES)]
        samples: u64,
    },
    /// Per-(feature, backend) R-squared matrix from features and results.
    ///
    /// CSV layout: one row per axis, one column per backend.
    Correlate {
        /// Features CSV produced by `qbk features`.
        features: PathBuf,
        /// Results JSONL produced by `qbk run`.
        results: PathBuf,
        /// Comma-separated families to drop, e.g. `bit_code,phase_code`.
        #[arg(long)]
        exclude: Option<String>,
        /// Add depth, qubit count, and two-qubit-gate count axes.
        #[arg(long)]
        extra_axes: bool,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // ignore failure if a pool exists already (e.g. under tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let seed = match std::env::var("QBK_SEED") {
        Ok(s) => Some(
            s.parse::<u64>()
                .map_err(|_| anyhow::anyhow!("QBK_SEED must be an unsigned integer, got '{s}'"))?,
        ),
        Err(_) => cli.seed,
    };
    let ctx = commands::Context {
        config: cli.config,
        seed,
        out: cli.out,
    };
    match cli.command {
        Command::Generate => commands::generate(&ctx),
        Command::Features { paths } => commands::features(&ctx, &paths),
        Command::Run => commands::run(&ctx),
        Command::Score { results } => commands::score(&ctx, &results),
        Command::Coverage {
            features,
            synthetic,
            samples,
        } => commands::coverage(&ctx, features.as_deref(), synthetic, samples),
        Command::Correlate {
            features,
            results,
            exclude,
            extra_axes,
        } => commands::correlate(
            &ctx,
            &features,
            &results,
            exclude.as_deref(),
            extra_axes,
        ),
    }
}
