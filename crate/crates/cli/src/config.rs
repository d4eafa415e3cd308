//! TOML suite configuration: which benchmarks to build, which simulated
//! backends to run them on, and where outputs go.

use anyhow::{bail, Context, Result};
use qbk_core::sim::NoiseModel;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

fn default_shots() -> u64 {
    2000
}

fn default_repetitions() -> u32 {
    5
}

fn default_rounds() -> usize {
    3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub family: String,
    pub sizes: Vec<usize>,
    /// Error-correction rounds (bit/phase code only).
    #[serde(default = "default_rounds")]
    pub rounds: usize,
    /// Instance seed for the randomized families (QAOA).
    #[serde(default)]
    pub seed: u64,
    /// Trotter steps (hamsim only).
    #[serde(default)]
    pub steps: Option<usize>,
    /// Disambiguates ids when the same family/size appears twice.
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackendSpec {
    pub name: String,
    #[serde(default)]
    pub p1: f64,
    #[serde(default)]
    pub p2: f64,
    #[serde(default)]
    pub p_meas: f64,
    #[serde(default)]
    pub p_reset: f64,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
}

impl BackendSpec {
    pub fn noise(&self) -> NoiseModel {
        NoiseModel {
            p1: self.p1,
            p2: self.p2,
            p_meas: self.p_meas,
            p_reset: self.p_reset,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    pub benchmarks: Vec<BenchmarkSpec>,
    pub backends: Vec<BackendSpec>,
}

impl SuiteConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: SuiteConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.benchmarks.is_empty() {
            bail!("config declares no benchmarks");
        }
        if self.backends.is_empty() {
            bail!("config declares no backends");
        }
        for b in &self.backends {
            if b.shots == 0 {
                bail!("backend '{}' must use at least one shot", b.name);
            }
            if b.repetitions == 0 {
                bail!("backend '{}' must use at least one repetition", b.name);
            }
            b.noise()
                .validate()
                .map_err(|e| anyhow::anyhow!("backend '{}': {e}", b.name))?;
        }
        let names: BTreeSet<&str> = self.backends.iter().map(|b| b.name.as_str()).collect();
        if names.len() != self.backends.len() {
            bail!("backend names must be unique");
        }
        Ok(())
    }

    /// The built-in default suite: all eight families at sizes 3..=8 on a
    /// noiseless 2000-shot backend with five repetitions.
    pub fn default_suite() -> Self {
        let benchmarks = qbk_core::bench::Family::ALL
            .iter()
            .map(|f| BenchmarkSpec {
                family: f.tag().to_string(),
                sizes: (3..=8).collect(),
                rounds: default_rounds(),
                seed: 1,
                steps: None,
                label: None,
            })
            .collect();
        SuiteConfig {
            out_dir: None,
            seed: Some(1),
            benchmarks,
            backends: vec![BackendSpec {
                name: "noiseless".to_string(),
                p1: 0.0,
                p2: 0.0,
                p_meas: 0.0,
                p_reset: 0.0,
                shots: default_shots(),
                repetitions: default_repetitions(),
            }],
        }
    }
}
