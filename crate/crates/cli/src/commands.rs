//! Subcommand implementations.

use crate::config::SuiteConfig;
use crate::suite;
use anyhow::{bail, Context as _, Result};
use qbk_core::analysis::{correlation_table, hull_volume_with, FeatureRecord, ScoreRow, ScoreTable};
use qbk_core::bench::BenchmarkInstance;
use qbk_core::features::{compute_features, raw_metrics};
use qbk_core::rng::{derive_seed, hash_str};
use qbk_core::sim::{sample, ShotHistogram};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub struct Context {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl Context {
    fn load_config(&self) -> Result<SuiteConfig> {
        match &self.config {
            Some(path) => SuiteConfig::load(path),
            None => Ok(SuiteConfig::default_suite()),
        }
    }

    fn out_dir(&self, cfg: &SuiteConfig) -> PathBuf {
        self.out
            .clone()
            .or_else(|| cfg.out_dir.clone())
            .unwrap_or_else(|| PathBuf::from("qbk-out"))
    }

    fn master_seed(&self, cfg: &SuiteConfig) -> u64 {
        self.seed.or(cfg.seed).unwrap_or(1)
    }
}

/// One executed (instance, backend, repetition) row of results.jsonl.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRecord {
    pub benchmark_id: String,
    pub family: String,
    pub backend: String,
    pub repetition: u32,
    pub seed: u64,
    pub score: f64,
    pub histogram_digest: String,
    pub wall_clock_ms: f64,
}

pub fn generate(ctx: &Context) -> Result<()> {
    let cfg = ctx.load_config()?;
    let out = ctx.out_dir(&cfg).join("instances");
    let instances = suite::build_suite(&cfg)?;
    for inst in &instances {
        suite::write_instance(&out, inst)?;
    }
    println!(
        "wrote {} instance(s) under {}",
        instances.len(),
        out.display()
    );
    Ok(())
}

fn feature_record(id: &str, family: &str, circuit: &qbk_core::circuit::Circuit) -> FeatureRecord {
    let f = compute_features(circuit);
    let m = raw_metrics(circuit);
    FeatureRecord {
        benchmark_id: id.to_string(),
        family: family.to_string(),
        features: f,
        qubits: m.qubits,
        depth: m.depth,
        two_qubit_gates: m.two_qubit_gates,
    }
}

/// Collects feature rows from .qasm files, instance directories, or
/// directories containing instance directories. Instance directories
/// contribute one row (their first circuit) under the manifest id.
fn collect_feature_records(paths: &[PathBuf]) -> Result<Vec<FeatureRecord>> {
    let mut rows = Vec::new();
    for path in paths {
        if path.is_dir() {
            if path.join("instance.json").exists() {
                let (manifest, circuits) = suite::read_instance(path)?;
                rows.push(feature_record(
                    &manifest.id,
                    manifest.family.tag(),
                    &circuits[0],
                ));
            } else {
                let mut entries: Vec<PathBuf> =
                    std::fs::read_dir(path)?.map(|e| Ok(e?.path())).collect::<Result<_>>()?;
                entries.sort();
                let nested: Vec<PathBuf> = entries
                    .into_iter()
                    .filter(|p| {
                        p.is_dir() && p.join("instance.json").exists()
                            || p.extension().map(|e| e == "qasm").unwrap_or(false)
                    })
                    .collect();
                if nested.is_empty() {
                    bail!("{} contains no instances or .qasm files", path.display());
                }
                rows.extend(collect_feature_records(&nested)?);
            }
        } else {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let circuit = qbk_core::qasm::parse_qasm(&text)
                .map_err(|e| anyhow::anyhow!("parsing {}: {e}", path.display()))?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            rows.push(feature_record(&id, "", &circuit));
        }
    }
    Ok(rows)
}

fn features_csv(rows: &[FeatureRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "benchmark_id",
        "family",
        "qubits",
        "depth",
        "two_qubit_gates",
        "communication",
        "critical_depth",
        "entanglement",
        "parallelism",
        "liveness",
        "measurement",
    ])?;
    for r in rows {
        let f = r.features.as_array();
        w.write_record([
            r.benchmark_id.clone(),
            r.family.clone(),
            r.qubits.to_string(),
            r.depth.to_string(),
            r.two_qubit_gates.to_string(),
            format!("{:.6}", f[0]),
            format!("{:.6}", f[1]),
            format!("{:.6}", f[2]),
            format!("{:.6}", f[3]),
            format!("{:.6}", f[4]),
            format!("{:.6}", f[5]),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn features(ctx: &Context, paths: &[PathBuf]) -> Result<()> {
    if paths.is_empty() {
        bail!("features requires at least one path");
    }
    let rows = collect_feature_records(paths)?;
    let csv_text = features_csv(&rows)?;
    match &ctx.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("features.csv"), &csv_text)?;
            let json = serde_json::to_string_pretty(&rows)?;
            std::fs::write(dir.join("features.json"), json + "\n")?;
            println!("wrote {} feature row(s) to {}", rows.len(), dir.display());
        }
        None => print!("{csv_text}"),
    }
    Ok(())
}

fn histogram_digest(hists: &[ShotHistogram]) -> String {
    let mut hasher = Sha256::new();
    for h in hists {
        hasher.update(h.canonical_string().as_bytes());
        hasher.update(b"|");
    }
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn run_one(
    inst: &BenchmarkInstance,
    backend: &crate::config::BackendSpec,
    repetition: u32,
    master_seed: u64,
) -> Result<ResultRecord> {
    let started = Instant::now();
    let seed = derive_seed(&[
        master_seed,
        hash_str(&inst.id),
        hash_str(&backend.name),
        repetition as u64,
    ]);
    let noise = backend.noise();
    let per_circuit = (backend.shots / inst.circuits.len() as u64).max(1);
    let hists = inst
        .circuits
        .iter()
        .enumerate()
        .map(|(k, c)| sample(c, per_circuit, &noise, derive_seed(&[seed, k as u64])))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let score = inst.score(&hists)?;
    Ok(ResultRecord {
        benchmark_id: inst.id.clone(),
        family: inst.family.tag().to_string(),
        backend: backend.name.clone(),
        repetition,
        seed,
        score,
        histogram_digest: histogram_digest(&hists),
        wall_clock_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn run(ctx: &Context) -> Result<()> {
    let cfg = ctx.load_config()?;
    let out_dir = ctx.out_dir(&cfg);
    std::fs::create_dir_all(&out_dir)?;
    let master_seed = ctx.master_seed(&cfg);
    let instances = suite::build_suite(&cfg)?;

    let mut tasks = Vec::new();
    for inst in &instances {
        for backend in &cfg.backends {
            for rep in 0..backend.repetitions {
                tasks.push((inst, backend, rep));
            }
        }
    }
    let records: Vec<ResultRecord> = tasks
        .par_iter()
        .map(|(inst, backend, rep)| run_one(inst, backend, *rep, master_seed))
        .collect::<Result<_>>()?;

    let path = out_dir.join("results.jsonl");
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .with_context(|| format!("opening {}", path.display()))?;
    for r in &records {
        writeln!(file, "{}", serde_json::to_string(r)?)?;
    }
    println!("appended {} record(s) to {}", records.len(), path.display());
    Ok(())
}

/// Parses a results JSONL, skipping a malformed trailing line with a
/// warning (partial writes are tolerated; anything malformed earlier is an
/// error).
pub fn read_results(path: &Path) -> Result<Vec<ResultRecord>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let mut out = Vec::with_capacity(lines.len());
    for (k, line) in lines.iter().enumerate() {
        match serde_json::from_str::<ResultRecord>(line) {
            Ok(r) => out.push(r),
            Err(e) if k + 1 == lines.len() => {
                eprintln!("warning: skipping malformed trailing line: {e}");
            }
            Err(e) => bail!("malformed record on line {}: {e}", k + 1),
        }
    }
    Ok(out)
}

fn aggregate(records: &[ResultRecord]) -> ScoreTable {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(String, String), (String, Vec<f64>)> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.benchmark_id.clone(), r.backend.clone()))
            .or_insert_with(|| (r.family.clone(), Vec::new()))
            .1
            .push(r.score);
    }
    let rows = groups
        .into_iter()
        .map(|((benchmark_id, backend), (family, scores))| {
            let n = scores.len() as f64;
            let mean = scores.iter().sum::<f64>() / n;
            let std_dev = if scores.len() < 2 {
                0.0
            } else {
                (scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0)).sqrt()
            };
            ScoreRow {
                benchmark_id,
                family,
                backend,
                mean_score: mean,
                std_dev,
                repetitions: scores.len(),
            }
        })
        .collect();
    ScoreTable { rows }
}

fn score_csv(table: &ScoreTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "benchmark_id",
        "family",
        "backend",
        "mean_score",
        "std_dev",
        "repetitions",
    ])?;
    for r in &table.rows {
        w.write_record([
            r.benchmark_id.clone(),
            r.family.clone(),
            r.backend.clone(),
            format!("{:.6}", r.mean_score),
            format!("{:.6}", r.std_dev),
            r.repetitions.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn score(ctx: &Context, results: &Path) -> Result<()> {
    let records = read_results(results)?;
    if records.is_empty() {
        bail!("no result records in {}", results.display());
    }
    let table = aggregate(&records);
    let csv_text = score_csv(&table)?;
    match &ctx.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("scores.csv"), &csv_text)?;
            println!("wrote {} row(s) to {}", table.rows.len(), dir.display());
        }
        None => print!("{csv_text}"),
    }
    Ok(())
}

pub fn read_feature_csv(path: &Path) -> Result<Vec<FeatureRecord>> {
    let mut rdr = csv::Reader::from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let get = |i: usize| -> Result<&str> {
            rec.get(i)
                .ok_or_else(|| anyhow::anyhow!("short row in {}", path.display()))
        };
        rows.push(FeatureRecord {
            benchmark_id: get(0)?.to_string(),
            family: get(1)?.to_string(),
            qubits: get(2)?.parse()?,
            depth: get(3)?.parse()?,
            two_qubit_gates: get(4)?.parse()?,
            features: qbk_core::features::FeatureVector {
                communication: get(5)?.parse()?,
                critical_depth: get(6)?.parse()?,
                entanglement: get(7)?.parse()?,
                parallelism: get(8)?.parse()?,
                liveness: get(9)?.parse()?,
                measurement: get(10)?.parse()?,
            },
        });
    }
    Ok(rows)
}

pub fn coverage(
    ctx: &Context,
    features: Option<&Path>,
    synthetic: bool,
    samples: u64,
) -> Result<()> {
    let (points, label): (Vec<Vec<f64>>, String) = if synthetic {
        (
            qbk_core::analysis::synthetic_suite_points(),
            "synthetic".to_string(),
        )
    } else if let Some(path) = features {
        let rows = read_feature_csv(path)?;
        (
            rows.iter().map(|r| r.features.as_array().to_vec()).collect(),
            path.display().to_string(),
        )
    } else {
        bail!("coverage requires a features CSV or --synthetic");
    };
    let v = hull_volume_with(&points, samples, ctx.seed.unwrap_or(0))?;
    println!("suite: {label}");
    println!("points: {}", points.len());
    println!("volume: {:.6e}", v.volume);
    println!("std_err: {:.3e}", v.std_err);
    println!("method: {:?}", v.method);
    if !points.is_empty() {
        let d = points[0].len();
        for k in 0..d {
            let lo = points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
            let name = if d == 6 {
                qbk_core::features::FeatureVector::AXES[k]
            } else {
                "axis"
            };
            println!("axis {k} ({name}): min {lo:.6} max {hi:.6}");
        }
    }
    if let Some(dir) = &ctx.out {
        std::fs::create_dir_all(dir)?;
        let json = serde_json::to_string_pretty(&v)?;
        std::fs::write(dir.join("coverage.json"), json + "\n")?;
    }
    Ok(())
}

pub fn correlate(
    ctx: &Context,
    features_path: &Path,
    results_path: &Path,
    exclude: Option<&str>,
    extra_axes: bool,
) -> Result<()> {
    let features = read_feature_csv(features_path)?;
    let records = read_results(results_path)?;
    if records.is_empty() {
        bail!("no result records in {}", results_path.display());
    }
    let excluded: Vec<String> = exclude
        .map(|s| s.split(',').map(|f| f.trim().to_string()).collect())
        .unwrap_or_default();
    let mut table = aggregate(&records);
    table.rows.retain(|r| !excluded.contains(&r.family));
    if table.rows.is_empty() {
        bail!("exclusion filter removed every score row");
    }
    let corr = correlation_table(&features, &table, extra_axes)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["axis".to_string()];
    header.extend(corr.backends.iter().cloned());
    w.write_record(&header)?;
    for (a, axis) in corr.axes.iter().enumerate() {
        let mut row = vec![axis.clone()];
        row.extend(corr.r2[a].iter().map(|v| format!("{v:.6}")));
        w.write_record(&row)?;
    }
    let csv_text = String::from_utf8(w.into_inner()?)?;
    match &ctx.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("r2.csv"), &csv_text)?;
            println!("wrote R2 matrix to {}", dir.join("r2.csv").display());
        }
        None => print!("{csv_text}"),
    }
    Ok(())
}
