//! Builds benchmark instances from a configuration and serializes them as
//! instance directories.

use crate::config::{BenchmarkSpec, SuiteConfig};
use anyhow::{bail, Context, Result};
use qbk_core::bench::{
    bit_code_instance, ghz_instance, hamsim_instance, mermin_bell_instance, phase_code_instance,
    qaoa_vanilla_instance, qaoa_zzswap_instance, vqe_instance, BenchmarkInstance, EcConfig,
    Family, FamilyParams, IdealPayload, TfimParams,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;

/// On-disk form of an instance: everything except the circuits, which live
/// in one `.qasm` file each.
#[derive(Debug, Serialize, Deserialize)]
pub struct InstanceManifest {
    pub id: String,
    pub family: Family,
    pub size: usize,
    pub seed: u64,
    pub params: FamilyParams,
    pub ideal: IdealPayload,
    pub circuits: Vec<String>,
}

pub fn build_instance(spec: &BenchmarkSpec, size: usize, label: Option<&str>) -> Result<BenchmarkInstance> {
    let family = Family::from_tag(&spec.family)?;
    let mut inst = match family {
        Family::Ghz => ghz_instance(size)?,
        Family::Mermin => mermin_bell_instance(size)?,
        Family::BitCode => bit_code_instance(&EcConfig::alternating_bits(size, spec.rounds)?)?,
        Family::PhaseCode => phase_code_instance(&EcConfig::alternating_signs(size, spec.rounds)?)?,
        Family::QaoaVanilla => qaoa_vanilla_instance(size, spec.seed)?,
        Family::QaoaZzswap => qaoa_zzswap_instance(size, spec.seed)?,
        Family::Vqe => vqe_instance(size)?,
        Family::Hamsim => {
            let params = TfimParams {
                steps: spec.steps.unwrap_or(TfimParams::default().steps),
                ..TfimParams::default()
            };
            hamsim_instance(size, &params)?
        }
    };
    if let Some(label) = label {
        inst.id = format!("{}-{label}", inst.id);
    }
    Ok(inst)
}

/// Expands a config into concrete instances, enforcing unique ids.
pub fn build_suite(config: &SuiteConfig) -> Result<Vec<BenchmarkInstance>> {
    let mut out = Vec::new();
    let mut ids = BTreeSet::new();
    for spec in &config.benchmarks {
        for &size in &spec.sizes {
            let inst = build_instance(spec, size, spec.label.as_deref())
                .with_context(|| format!("building {} at size {size}", spec.family))?;
            if !ids.insert(inst.id.clone()) {
                bail!(
                    "duplicate benchmark id '{}'; use `label` to disambiguate",
                    inst.id
                );
            }
            out.push(inst);
        }
    }
    Ok(out)
}

/// Writes `<dir>/<id>/instance.json` plus `circuit_<k>.qasm` files.
pub fn write_instance(dir: &Path, inst: &BenchmarkInstance) -> Result<()> {
    let inst_dir = dir.join(&inst.id);
    std::fs::create_dir_all(&inst_dir)
        .with_context(|| format!("creating {}", inst_dir.display()))?;
    let mut circuit_files = Vec::new();
    for (k, circuit) in inst.circuits.iter().enumerate() {
        let name = format!("circuit_{k}.qasm");
        std::fs::write(inst_dir.join(&name), qbk_core::qasm::emit_qasm(circuit))?;
        circuit_files.push(name);
    }
    let manifest = InstanceManifest {
        id: inst.id.clone(),
        family: inst.family,
        size: inst.size,
        seed: inst.seed,
        params: inst.params.clone(),
        ideal: inst.ideal.clone(),
        circuits: circuit_files,
    };
    let json = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(inst_dir.join("instance.json"), json + "\n")?;
    Ok(())
}

/// Reads an instance directory back, parsing its circuits.
pub fn read_instance(dir: &Path) -> Result<(InstanceManifest, Vec<qbk_core::circuit::Circuit>)> {
    let manifest_path = dir.join("instance.json");
    let text = std::fs::read_to_string(&manifest_path)
        .with_context(|| format!("reading {}", manifest_path.display()))?;
    let manifest: InstanceManifest = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", manifest_path.display()))?;
    let mut circuits = Vec::new();
    for name in &manifest.circuits {
        let qasm = std::fs::read_to_string(dir.join(name))
            .with_context(|| format!("reading {}", dir.join(name).display()))?;
        circuits.push(
            qbk_core::qasm::parse_qasm(&qasm)
                .map_err(|e| anyhow::anyhow!("parsing {}: {e}", dir.join(name).display()))?,
        );
    }
    Ok((manifest, circuits))
}
