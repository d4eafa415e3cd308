//! Error-correction proxy benchmarks: bit-flip and phase-flip repetition
//! codes with mid-circuit syndrome measurement and reset.
//!
//! Layout: `k` data qubits interleaved with `k-1` ancillas on one register
//! (`data_i = q[2i]`, `anc_i = q[2i+1]`). Classical bits 0..k-1 hold the
//! final data readout; bit `k + j*(k-1) + i` holds ancilla `i` of round `j`.
//! A barrier separates the rounds from the terminal data measurement.

use super::{BenchError, BenchmarkInstance, Family, FamilyParams, IdealPayload};
use crate::circuit::{Circuit, Gate};
use crate::sim::Distribution;

/// Repetition-code parameters: data qubits, rounds, and the initial pattern.
/// For the bit code `true` means the data qubit starts in one; for the phase
/// code `true` means it starts in the minus state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcConfig {
    pub data_qubits: usize,
    pub rounds: usize,
    pub pattern: Vec<bool>,
}

impl EcConfig {
    pub fn new(data_qubits: usize, rounds: usize, pattern: Vec<bool>) -> Result<Self, BenchError> {
        if data_qubits < 2 || rounds < 1 {
            return Err(BenchError::BadEcConfig);
        }
        if pattern.len() != data_qubits {
            return Err(BenchError::PatternLength {
                expected: data_qubits,
                got: pattern.len(),
            });
        }
        Ok(EcConfig {
            data_qubits,
            rounds,
            pattern,
        })
    }

    /// `0101...` initial data bits.
    pub fn alternating_bits(data_qubits: usize, rounds: usize) -> Result<Self, BenchError> {
        EcConfig::new(
            data_qubits,
            rounds,
            (0..data_qubits).map(|i| i % 2 == 1).collect(),
        )
    }

    /// `+-+-...` initial data signs.
    pub fn alternating_signs(data_qubits: usize, rounds: usize) -> Result<Self, BenchError> {
        Self::alternating_bits(data_qubits, rounds)
    }

    pub fn pattern_string(&self, phase: bool) -> String {
        self.pattern
            .iter()
            .map(|&b| match (phase, b) {
                (false, false) => '0',
                (false, true) => '1',
                (true, false) => '+',
                (true, true) => '-',
            })
            .collect()
    }

    fn total_qubits(&self) -> usize {
        2 * self.data_qubits - 1
    }

    fn total_cbits(&self) -> usize {
        self.data_qubits + self.rounds * (self.data_qubits - 1)
    }

    fn data(&self, i: usize) -> usize {
        2 * i
    }

    fn ancilla(&self, i: usize) -> usize {
        2 * i + 1
    }

    fn syndrome_cbit(&self, round: usize, i: usize) -> usize {
        self.data_qubits + round * (self.data_qubits - 1) + i
    }

    /// Noiseless syndrome bit for check `i`: the parity of adjacent pattern
    /// entries, identical every round.
    fn expected_syndrome(&self, i: usize) -> bool {
        self.pattern[i] ^ self.pattern[i + 1]
    }

    fn syndrome_key(&self) -> u64 {
        let mut key = 0u64;
        for j in 0..self.rounds {
            for i in 0..self.data_qubits - 1 {
                if self.expected_syndrome(i) {
                    key |= 1 << self.syndrome_cbit(j, i);
                }
            }
        }
        key
    }
}

/// Bit-flip repetition code: X-initialized data, per-round CX parity checks
/// into each ancilla followed by its measure and reset, then a final data
/// measurement. The noiseless outcome is deterministic.
pub fn bit_code_instance(cfg: &EcConfig) -> Result<BenchmarkInstance, BenchError> {
    let cfg = EcConfig::new(cfg.data_qubits, cfg.rounds, cfg.pattern.clone())?;
    let k = cfg.data_qubits;
    let mut c = Circuit::new();
    c.add_qreg("q", cfg.total_qubits())?;
    c.add_creg("c", cfg.total_cbits())?;
    for (i, &bit) in cfg.pattern.iter().enumerate() {
        if bit {
            c.push_gate(Gate::X, &[cfg.data(i)])?;
        }
    }
    for round in 0..cfg.rounds {
        for i in 0..k - 1 {
            c.push_gate(Gate::Cx, &[cfg.data(i), cfg.ancilla(i)])?;
            c.push_gate(Gate::Cx, &[cfg.data(i + 1), cfg.ancilla(i)])?;
        }
        for i in 0..k - 1 {
            c.measure(cfg.ancilla(i), cfg.syndrome_cbit(round, i))?;
            c.reset(cfg.ancilla(i))?;
        }
    }
    c.barrier_all()?;
    for i in 0..k {
        c.measure(cfg.data(i), i)?;
    }

    let mut key = cfg.syndrome_key();
    for (i, &bit) in cfg.pattern.iter().enumerate() {
        if bit {
            key |= 1 << i;
        }
    }
    let ideal = Distribution::point_mass(cfg.total_cbits(), key);
    Ok(BenchmarkInstance {
        id: format!("bit_code-n{}-r{}", k, cfg.rounds),
        family: Family::BitCode,
        size: k,
        seed: 0,
        params: FamilyParams::Ec {
            rounds: cfg.rounds,
            pattern: cfg.pattern_string(false),
        },
        circuits: vec![c],
        ideal: IdealPayload::Distribution { ideal },
    })
}

/// Phase-flip repetition code: the bit-code skeleton conjugated into the
/// phase basis. Data qubits start in plus/minus states; each check is an
/// ancilla-controlled XX parity read out through H-sandwiched CXs. The
/// noiseless data readout is uniform while syndromes are deterministic.
pub fn phase_code_instance(cfg: &EcConfig) -> Result<BenchmarkInstance, BenchError> {
    let cfg = EcConfig::new(cfg.data_qubits, cfg.rounds, cfg.pattern.clone())?;
    let k = cfg.data_qubits;
    let mut c = Circuit::new();
    c.add_qreg("q", cfg.total_qubits())?;
    c.add_creg("c", cfg.total_cbits())?;
    for (i, &minus) in cfg.pattern.iter().enumerate() {
        c.push_gate(Gate::H, &[cfg.data(i)])?;
        if minus {
            c.push_gate(Gate::Z, &[cfg.data(i)])?;
        }
    }
    for round in 0..cfg.rounds {
        for i in 0..k - 1 {
            c.push_gate(Gate::H, &[cfg.ancilla(i)])?;
            c.push_gate(Gate::Cx, &[cfg.ancilla(i), cfg.data(i)])?;
            c.push_gate(Gate::Cx, &[cfg.ancilla(i), cfg.data(i + 1)])?;
            c.push_gate(Gate::H, &[cfg.ancilla(i)])?;
        }
        for i in 0..k - 1 {
            c.measure(cfg.ancilla(i), cfg.syndrome_cbit(round, i))?;
            c.reset(cfg.ancilla(i))?;
        }
    }
    c.barrier_all()?;
    for i in 0..k {
        c.measure(cfg.data(i), i)?;
    }

    let syndrome = cfg.syndrome_key();
    let keys = (0..1u64 << k).map(|data| data | syndrome);
    let ideal = Distribution::uniform_over(cfg.total_cbits(), keys);
    Ok(BenchmarkInstance {
        id: format!("phase_code-n{}-r{}", k, cfg.rounds),
        family: Family::PhaseCode,
        size: k,
        seed: 0,
        params: FamilyParams::Ec {
            rounds: cfg.rounds,
            pattern: cfg.pattern_string(true),
        },
        circuits: vec![c],
        ideal: IdealPayload::Distribution { ideal },
    })
}
