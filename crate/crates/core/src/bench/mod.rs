//! The eight benchmark families: circuit generators, ideal reference
//! payloads, and application-level score functions mapping execution
//! histograms into `[0, 1]`.
//!
//! Every generator measures qubit `i` into classical bit `i` of a `c`
//! register unless noted otherwise, so diagonal score observables read the
//! histogram directly.

mod ec;
mod hamsim;
mod qaoa;
mod vqe;

pub use ec::{bit_code_instance, phase_code_instance, EcConfig};
pub use hamsim::{hamsim_instance, hamsim_score, magnetization_observable, TfimParams};
pub use qaoa::{
    optimize_qaoa_params, qaoa_score, qaoa_vanilla_circuit, qaoa_vanilla_instance,
    qaoa_zzswap_circuit, qaoa_zzswap_instance, sk_instance, sk_observable, zzswap_final_wires,
    QaoaParams, SkInstance,
};
pub use vqe::{tfim_exact_ground_energy, tfim_hamiltonian, vqe_instance, vqe_score};

use crate::circuit::{Circuit, CircuitError, Gate};
use crate::pauli::{
    expectation_from_histogram, mermin_operator, shared_basis_circuit, Observable, PauliError,
};
use crate::sim::{Distribution, ShotHistogram, SimError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("benchmark requires n >= 2, got {0}")]
    TooSmall(usize),
    #[error("size {got} exceeds the guard of {limit} qubits for this operation")]
    SizeGuard { limit: usize, got: usize },
    #[error("pattern length {got} does not match {expected} data qubits")]
    PatternLength { expected: usize, got: usize },
    #[error("error-correction config requires k >= 2 data qubits and r >= 1 rounds")]
    BadEcConfig,
    #[error("distributions must be normalized within 1e-9")]
    NotNormalized,
    #[error("histogram width {got} does not match expected width {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("score undefined: |ideal| = {0:e} is below the 1e-6 guard")]
    ScoreUndefined(f64),
    #[error("no usable instance found after {0} seed attempts")]
    SeedExhausted(u32),
    #[error("instance got {got} histograms, expected {expected}")]
    HistogramCount { expected: usize, got: usize },
    #[error("unknown benchmark family '{0}'")]
    UnknownFamily(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Benchmark family tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ghz,
    Mermin,
    BitCode,
    PhaseCode,
    QaoaVanilla,
    QaoaZzswap,
    Vqe,
    Hamsim,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Ghz,
        Family::Mermin,
        Family::BitCode,
        Family::PhaseCode,
        Family::QaoaVanilla,
        Family::QaoaZzswap,
        Family::Vqe,
        Family::Hamsim,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Family::Ghz => "ghz",
            Family::Mermin => "mermin",
            Family::BitCode => "bit_code",
            Family::PhaseCode => "phase_code",
            Family::QaoaVanilla => "qaoa_vanilla",
            Family::QaoaZzswap => "qaoa_zzswap",
            Family::Vqe => "vqe",
            Family::Hamsim => "hamsim",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Family, BenchError> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.tag() == tag)
            .ok_or_else(|| BenchError::UnknownFamily(tag.to_string()))
    }
}

/// Family-specific parameters recorded with an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyParams {
    Plain,
    Ec {
        rounds: usize,
        pattern: String,
    },
    Qaoa {
        sk_seed: u64,
        weights: Vec<i8>,
        gamma: f64,
        beta: f64,
    },
    Vqe {
        thetas: Vec<f64>,
    },
    Hamsim {
        j_z: f64,
        eps_ph: f64,
        omega_ph: f64,
        dt: f64,
        steps: usize,
    },
}

/// Ideal reference data sufficient to score histograms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IdealPayload {
    /// Hellinger-scored families: the ideal output distribution.
    Distribution { ideal: Distribution },
    /// A diagonal observable and its noiseless expectation value.
    PauliExpectation { observable: Observable, value: f64 },
    /// Two-basis energy estimation: ZZ terms from the first circuit, X terms
    /// (pre-rotated to Z) from the second.
    TwoBasisEnergy {
        z_observable: Observable,
        x_observable: Observable,
        value: f64,
    },
    /// Average magnetization of the noiseless circuit.
    Magnetization { value: f64 },
}

/// A named, parameterized benchmark: its circuits plus the reference data
/// needed to compute a score from histograms alone.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkInstance {
    pub id: String,
    pub family: Family,
    pub size: usize,
    pub seed: u64,
    pub params: FamilyParams,
    pub circuits: Vec<Circuit>,
    pub ideal: IdealPayload,
}

impl BenchmarkInstance {
    /// Scores one histogram per circuit against the ideal payload.
    pub fn score(&self, hists: &[ShotHistogram]) -> Result<f64, BenchError> {
        if hists.len() != self.circuits.len() {
            return Err(BenchError::HistogramCount {
                expected: self.circuits.len(),
                got: hists.len(),
            });
        }
        match &self.ideal {
            IdealPayload::Distribution { ideal } => {
                let observed = normalized_checked(&hists[0], ideal.width())?;
                hellinger_fidelity(&observed, ideal)
            }
            IdealPayload::PauliExpectation { observable, value } => match self.family {
                Family::Mermin => {
                    let m = expectation_from_histogram(observable, &hists[0])?;
                    Ok(mermin_score_from_expectation(m, self.size))
                }
                _ => {
                    let e = expectation_from_histogram(observable, &hists[0])?;
                    qaoa_score(e, *value)
                }
            },
            IdealPayload::TwoBasisEnergy {
                z_observable,
                x_observable,
                value,
            } => {
                let ez = expectation_from_histogram(z_observable, &hists[0])?;
                let ex = expectation_from_histogram(x_observable, &hists[1])?;
                vqe_score(ez + ex, *value)
            }
            IdealPayload::Magnetization { value } => {
                let obs = magnetization_observable(self.size)?;
                let m = expectation_from_histogram(&obs, &hists[0])?;
                Ok(hamsim_score(m, *value))
            }
        }
    }
}

fn normalized_checked(hist: &ShotHistogram, width: usize) -> Result<Distribution, BenchError> {
    if hist.width() != width {
        return Err(BenchError::WidthMismatch {
            expected: width,
            got: hist.width(),
        });
    }
    if hist.shots() == 0 {
        return Err(BenchError::Pauli(PauliError::EmptyHistogram));
    }
    Ok(hist.normalized())
}

/// Hadamard on qubit 0 followed by a CX ladder and terminal measurement.
pub fn ghz_circuit(n: usize) -> Result<Circuit, BenchError> {
    if n < 2 {
        return Err(BenchError::TooSmall(n));
    }
    let mut c = Circuit::new();
    c.add_qreg("q", n)?;
    c.add_creg("c", n)?;
    c.push_gate(Gate::H, &[0])?;
    for i in 0..n - 1 {
        c.push_gate(Gate::Cx, &[i, i + 1])?;
    }
    for i in 0..n {
        c.measure(i, i)?;
    }
    Ok(c)
}

/// The two-point GHZ target: half all-zeros, half all-ones.
pub fn ghz_ideal_distribution(n: usize) -> Distribution {
    let ones = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Distribution::new(
        n,
        [(0u64, 0.5), (ones, 0.5)].into_iter().collect(),
    )
}

pub fn ghz_instance(n: usize) -> Result<BenchmarkInstance, BenchError> {
    Ok(BenchmarkInstance {
        id: format!("ghz-n{n}"),
        family: Family::Ghz,
        size: n,
        seed: 0,
        params: FamilyParams::Plain,
        circuits: vec![ghz_circuit(n)?],
        ideal: IdealPayload::Distribution {
            ideal: ghz_ideal_distribution(n),
        },
    })
}

/// Hellinger fidelity `(sum_x sqrt(p(x) q(x)))^2` between two normalized
/// distributions of equal width.
pub fn hellinger_fidelity(p: &Distribution, q: &Distribution) -> Result<f64, BenchError> {
    if p.width() != q.width() {
        return Err(BenchError::WidthMismatch {
            expected: p.width(),
            got: q.width(),
        });
    }
    if !p.is_normalized(1e-9) || !q.is_normalized(1e-9) {
        return Err(BenchError::NotNormalized);
    }
    let mut bc = 0.0;
    for (k, &pv) in p.probs() {
        if let Some(&qv) = q.probs().get(k) {
            bc += (pv * qv).sqrt();
        }
    }
    Ok((bc * bc).clamp(0.0, 1.0))
}

/// GHZ score: Hellinger fidelity of the histogram against the two-point
/// ideal distribution.
pub fn ghz_score(hist: &ShotHistogram) -> Result<f64, BenchError> {
    let ideal = ghz_ideal_distribution(hist.width());
    let observed = normalized_checked(hist, hist.width())?;
    hellinger_fidelity(&observed, &ideal)
}

/// Prepares `(|0..0> + i|1..1>)/sqrt(2)`, rotates into the shared Mermin
/// eigenbasis, and measures. The ideal payload is the quantum expectation
/// `2^(n-1)` with the diagonalized operator stored for scoring.
pub fn mermin_bell_instance(n: usize) -> Result<BenchmarkInstance, BenchError> {
    if n < 2 {
        return Err(BenchError::TooSmall(n));
    }
    let mut c = Circuit::new();
    c.add_qreg("q", n)?;
    c.add_creg("c", n)?;
    c.push_gate(Gate::H, &[0])?;
    c.push_gate(Gate::S, &[0])?;
    for i in 0..n - 1 {
        c.push_gate(Gate::Cx, &[i, i + 1])?;
    }
    let (basis_change, diag) = shared_basis_circuit(&mermin_operator(n)?)?;
    c.append_unitary(&basis_change)?;
    for i in 0..n {
        c.measure(i, i)?;
    }
    Ok(BenchmarkInstance {
        id: format!("mermin-n{n}"),
        family: Family::Mermin,
        size: n,
        seed: 0,
        params: FamilyParams::Plain,
        circuits: vec![c],
        ideal: IdealPayload::PauliExpectation {
            observable: diag,
            value: (1u64 << (n - 1)) as f64,
        },
    })
}

fn mermin_score_from_expectation(m: f64, n: usize) -> f64 {
    let half = (1u64 << (n - 1)) as f64;
    ((m + half) / (2.0 * half)).clamp(0.0, 1.0)
}

/// Mermin score `(<M> + 2^(n-1)) / 2^n`, with `<M>` estimated from the
/// histogram of the shared-basis circuit.
pub fn mermin_score(hist: &ShotHistogram, n: usize) -> Result<f64, BenchError> {
    let (_, diag) = shared_basis_circuit(&mermin_operator(n)?)?;
    let m = expectation_from_histogram(&diag, hist)?;
    Ok(mermin_score_from_expectation(m, n))
}

/// Local-hidden-variable ceiling on the Mermin score:
/// `(2^((n - n mod 2)/2) + 2^(n-1)) / 2^n`.
pub fn mermin_classical_bound_score(n: usize) -> f64 {
    let bound = 2f64.powi(((n - (n % 2)) / 2) as i32);
    let half = (1u64 << (n - 1)) as f64;
    (bound + half) / (2.0 * half)
}

/// Hellinger fidelity of a histogram against an instance's ideal
/// distribution; the score for both error-correction families.
pub fn ec_score(hist: &ShotHistogram, instance: &BenchmarkInstance) -> Result<f64, BenchError> {
    let IdealPayload::Distribution { ideal } = &instance.ideal else {
        return Err(BenchError::WidthMismatch {
            expected: 0,
            got: hist.width(),
        });
    };
    let observed = normalized_checked(hist, ideal.width())?;
    hellinger_fidelity(&observed, ideal)
}

/// Builds the instance for `family` at `size` with default parameters:
/// error-correction families use `rounds` rounds and an alternating pattern,
/// QAOA families draw the SK instance from `seed`, Hamiltonian simulation
/// uses the default drive.
pub fn build_instance(
    family: Family,
    size: usize,
    rounds: usize,
    seed: u64,
) -> Result<BenchmarkInstance, BenchError> {
    match family {
        Family::Ghz => ghz_instance(size),
        Family::Mermin => mermin_bell_instance(size),
        Family::BitCode => bit_code_instance(&EcConfig::alternating_bits(size, rounds)?),
        Family::PhaseCode => phase_code_instance(&EcConfig::alternating_signs(size, rounds)?),
        Family::QaoaVanilla => qaoa_vanilla_instance(size, seed),
        Family::QaoaZzswap => qaoa_zzswap_instance(size, seed),
        Family::Vqe => vqe_instance(size),
        Family::Hamsim => hamsim_instance(size, &TfimParams::default()),
    }
}
