//! Noiseless statevector simulation and noisy trajectory shot sampling with
//! mid-circuit measurement and reset.
//!
//! Bit conventions: qubit 0 is the least significant bit of a state index,
//! classical bit 0 is the least significant bit of a histogram key, and
//! printed bitstrings list bit 0 first. Sampling is deterministic for a
//! given `(circuit, shots, noise, seed)` regardless of thread count: every
//! shot draws from its own counter-derived RNG stream.

use crate::circuit::{Circuit, Gate, OpKind};
use crate::pauli::{expectation_from_histogram, Observable, PauliError, PauliOp, PauliString};
use crate::rng::stream_rng;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest qubit count the statevector engine accepts.
pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("statevector simulation is limited to {MAX_QUBITS} qubits, got {0}")]
    TooManyQubits(usize),
    #[error("circuit contains measure/reset; statevector simulation is unitary-only")]
    MeasureInCircuit,
    #[error("noise probabilities must lie in [0, 1]")]
    InvalidNoise,
    #[error("shots must be at least 1")]
    NoShots,
    #[error("bitstring '{0}' is not a binary word")]
    BadBitstring(String),
    #[error("histogram counts are inconsistent")]
    BadHistogram,
    #[error("amplitude vector has the wrong length or is not normalized")]
    BadState,
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Depolarizing gate noise with separate readout and reset errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Probability of a random Pauli after each one-qubit unitary.
    pub p1: f64,
    /// Probability of a random two-qubit Pauli after each two-qubit unitary.
    pub p2: f64,
    /// Symmetric readout bit-flip probability.
    pub p_meas: f64,
    /// Probability that a reset leaves the qubit in one.
    pub p_reset: f64,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel {
            p1: 0.0,
            p2: 0.0,
            p_meas: 0.0,
            p_reset: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let ok = [self.p1, self.p2, self.p_meas, self.p_reset]
            .iter()
            .all(|p| (0.0..=1.0).contains(p));
        if ok {
            Ok(())
        } else {
            Err(SimError::InvalidNoise)
        }
    }

    pub fn is_noiseless_gates(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0
    }
}

/// Formats a key as a bitstring with bit 0 printed first.
pub fn format_bits(key: u64, width: usize) -> String {
    (0..width)
        .map(|i| if key >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses a bitstring in the same convention.
pub fn parse_bits(s: &str) -> Result<(u64, usize), SimError> {
    let mut key = 0u64;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => key |= 1 << i,
            _ => return Err(SimError::BadBitstring(s.to_string())),
        }
    }
    Ok((key, s.len()))
}

/// Map from observed classical bitstring to count for one circuit execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotHistogram {
    width: usize,
    shots: u64,
    counts: BTreeMap<u64, u64>,
}

impl ShotHistogram {
    pub fn from_counts(
        width: usize,
        counts: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self, SimError> {
        let mut map = BTreeMap::new();
        let mut shots = 0u64;
        for (k, v) in counts {
            if width < 64 && k >> width != 0 {
                return Err(SimError::BadHistogram);
            }
            *map.entry(k).or_insert(0) += v;
            shots += v;
        }
        Ok(ShotHistogram {
            width,
            shots,
            counts: map,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// Empirical distribution of the observed bitstrings.
    pub fn normalized(&self) -> Distribution {
        let total = self.shots as f64;
        Distribution {
            width: self.width,
            probs: self
                .counts
                .iter()
                .map(|(&k, &v)| (k, v as f64 / total))
                .collect(),
        }
    }

    /// Canonical text form used for digests: width, shots, then sorted
    /// `bitstring:count` pairs.
    pub fn canonical_string(&self) -> String {
        let mut s = format!("w={};n={}", self.width, self.shots);
        for (&k, &v) in &self.counts {
            s.push(';');
            s.push_str(&format_bits(k, self.width));
            s.push(':');
            s.push_str(&v.to_string());
        }
        s
    }
}

/// A probability distribution over bitstrings of a fixed width.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    width: usize,
    probs: BTreeMap<u64, f64>,
}

impl Distribution {
    pub fn new(width: usize, probs: BTreeMap<u64, f64>) -> Self {
        Distribution { width, probs }
    }

    pub fn point_mass(width: usize, key: u64) -> Self {
        Distribution {
            width,
            probs: [(key, 1.0)].into_iter().collect(),
        }
    }

    pub fn uniform_over(width: usize, keys: impl IntoIterator<Item = u64>) -> Self {
        let keys: Vec<u64> = keys.into_iter().collect();
        let p = 1.0 / keys.len() as f64;
        Distribution {
            width,
            probs: keys.into_iter().map(|k| (k, p)).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn probs(&self) -> &BTreeMap<u64, f64> {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.total() - 1.0).abs() <= tol && self.probs.values().all(|p| *p >= 0.0)
    }
}

impl Serialize for Distribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, f64> = self
            .probs
            .iter()
            .map(|(&k, &p)| (format_bits(k, self.width), p))
            .collect();
        #[derive(Serialize)]
        struct Repr {
            width: usize,
            probs: BTreeMap<String, f64>,
        }
        Repr {
            width: self.width,
            probs: map,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Distribution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            width: usize,
            probs: BTreeMap<String, f64>,
        }
        let r = Repr::deserialize(deserializer)?;
        let mut probs = BTreeMap::new();
        for (s, p) in r.probs {
            let (k, w) = parse_bits(&s).map_err(D::Error::custom)?;
            if w != r.width {
                return Err(D::Error::custom("bitstring width mismatch"));
            }
            probs.insert(k, p);
        }
        Ok(Distribution {
            width: r.width,
            probs,
        })
    }
}

/// Exact state of an n-qubit register; amplitudes indexed little-endian by
/// qubit 0.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(n: usize) -> Result<Self, SimError> {
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Wraps explicit amplitudes; the norm must already be 1 within 1e-9.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self, SimError> {
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n));
        }
        if amps.len() != 1 << n {
            return Err(SimError::BadState);
        }
        let state = StateVector { n, amps };
        if (state.norm() - 1.0).abs() > 1e-9 {
            return Err(SimError::BadState);
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply_gate(&mut self, gate: Gate, qubits: &[usize]) {
        match gate {
            Gate::Cx => self.apply_cx(qubits[0], qubits[1]),
            Gate::Cz => self.apply_cz(qubits[0], qubits[1]),
            Gate::Swap => self.apply_swap(qubits[0], qubits[1]),
            Gate::Rzz(t) => self.apply_rzz(qubits[0], qubits[1], t),
            g => self.apply_1q(gate_matrix(g), qubits[0]),
        }
    }

    fn apply_1q(&mut self, m: [[Complex64; 2]; 2], q: usize) {
        let bit = 1usize << q;
        for base in 0..self.amps.len() {
            if base & bit == 0 {
                let a0 = self.amps[base];
                let a1 = self.amps[base | bit];
                self.amps[base] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[base | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_cx(&mut self, c: usize, t: usize) {
        let (cb, tb) = (1usize << c, 1usize << t);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    fn apply_cz(&mut self, a: usize, b: usize) {
        let (ab, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & ab != 0 && i & bb != 0 {
                self.amps[i] = -self.amps[i];
            }
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (ab, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & ab != 0 && i & bb == 0 {
                self.amps.swap(i, (i & !ab) | bb);
            }
        }
    }

    fn apply_rzz(&mut self, a: usize, b: usize, theta: f64) {
        let (ab, bb) = (1usize << a, 1usize << b);
        let minus = Complex64::from_polar(1.0, -theta / 2.0);
        let plus = Complex64::from_polar(1.0, theta / 2.0);
        for i in 0..self.amps.len() {
            let parity = ((i & ab != 0) as u8) ^ ((i & bb != 0) as u8);
            self.amps[i] *= if parity == 0 { minus } else { plus };
        }
    }

    fn apply_pauli(&mut self, op: PauliOp, q: usize) {
        match op {
            PauliOp::I => {}
            PauliOp::X => self.apply_1q(gate_matrix(Gate::X), q),
            PauliOp::Y => self.apply_1q(gate_matrix(Gate::Y), q),
            PauliOp::Z => self.apply_1q(gate_matrix(Gate::Z), q),
        }
    }

    fn prob_one(&self, q: usize) -> f64 {
        let bit = 1usize << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn collapse(&mut self, q: usize, outcome: bool, prob: f64) {
        let bit = 1usize << q;
        let scale = 1.0 / prob.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & bit != 0) == outcome {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
    }

    fn set_to_zero(&mut self, q: usize, outcome: bool) {
        if outcome {
            self.apply_1q(gate_matrix(Gate::X), q);
        }
    }

    /// Exact expectation of a single Pauli word.
    pub fn pauli_expectation(&self, p: &PauliString) -> f64 {
        assert_eq!(p.len(), self.n, "pauli width must match state");
        let mut x_mask = 0usize;
        let mut y_mask = 0usize;
        let mut z_mask = 0usize;
        for (q, o) in p.ops().iter().enumerate() {
            match o {
                PauliOp::I => {}
                PauliOp::X => x_mask |= 1 << q,
                PauliOp::Y => {
                    x_mask |= 1 << q;
                    y_mask |= 1 << q;
                }
                PauliOp::Z => z_mask |= 1 << q,
            }
        }
        let y_count = y_mask.count_ones() as usize;
        // i^y_count
        let base_phase = match y_count % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, amp) in self.amps.iter().enumerate() {
            let src = j ^ x_mask;
            // P|src> = phase * |j>; phase = i^{#Y} * (-1)^{(y|z) bits of src}
            let signs = ((src & (y_mask | z_mask)).count_ones() % 2) as i32;
            let phase = if signs == 0 { base_phase } else { -base_phase };
            acc += amp.conj() * phase * self.amps[src];
        }
        acc.re
    }

    /// Exact expectation of an observable.
    pub fn observable_expectation(&self, obs: &Observable) -> f64 {
        obs.terms()
            .iter()
            .map(|(c, p)| c * self.pauli_expectation(p))
            .sum()
    }
}

fn gate_matrix(g: Gate) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let f = std::f64::consts::FRAC_1_SQRT_2;
    match g {
        Gate::H => [
            [Complex64::new(f, 0.0), Complex64::new(f, 0.0)],
            [Complex64::new(f, 0.0), Complex64::new(-f, 0.0)],
        ],
        Gate::X => [[z, one], [one, z]],
        Gate::Y => [[z, -i], [i, z]],
        Gate::Z => [[one, z], [z, -one]],
        Gate::S => [[one, z], [z, i]],
        Gate::Sdg => [[one, z], [z, -i]],
        Gate::T => [[one, z], [z, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]],
        Gate::Tdg => [[one, z], [z, Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)]],
        Gate::Rx(t) => {
            let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
            [
                [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
            ]
        }
        Gate::Ry(t) => {
            let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
            [
                [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
            ]
        }
        Gate::Rz(t) => [
            [Complex64::from_polar(1.0, -t / 2.0), z],
            [z, Complex64::from_polar(1.0, t / 2.0)],
        ],
        _ => unreachable!("two-qubit gates are applied directly"),
    }
}

/// Exact statevector after all unitaries of a measurement-free circuit.
/// Barriers are ignored.
pub fn simulate_state(circuit: &Circuit) -> Result<StateVector, SimError> {
    let n = circuit.qubit_count();
    if n > MAX_QUBITS {
        return Err(SimError::TooManyQubits(n));
    }
    if circuit
        .instructions()
        .iter()
        .any(|i| i.is_measure() || i.is_reset())
    {
        return Err(SimError::MeasureInCircuit);
    }
    let mut state = StateVector::zero_state(n)?;
    for ins in circuit.instructions() {
        if let OpKind::Gate(g) = ins.kind {
            let qs: Vec<usize> = ins.qubits.iter().map(|q| q.0).collect();
            state.apply_gate(g, &qs);
        }
    }
    Ok(state)
}

fn run_trajectory(
    circuit: &Circuit,
    noise: &NoiseModel,
    seed: u64,
    shot: u64,
) -> u64 {
    let n = circuit.qubit_count();
    let mut rng = stream_rng(seed, shot);
    let mut state = StateVector::zero_state(n).expect("guarded by sample()");
    let mut cbits = 0u64;
    for ins in circuit.instructions() {
        match &ins.kind {
            OpKind::Gate(g) => {
                let qs: Vec<usize> = ins.qubits.iter().map(|q| q.0).collect();
                state.apply_gate(*g, &qs);
                let p = if g.is_two_qubit() { noise.p2 } else { noise.p1 };
                let u: f64 = rng.gen();
                if u < p {
                    if g.is_two_qubit() {
                        // uniform non-identity two-qubit Pauli
                        let which = rng.gen_range(1..16u8);
                        let ops = [PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z];
                        state.apply_pauli(ops[(which & 3) as usize], qs[0]);
                        state.apply_pauli(ops[(which >> 2) as usize], qs[1]);
                    } else {
                        let which = rng.gen_range(1..4u8);
                        let ops = [PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z];
                        state.apply_pauli(ops[which as usize], qs[0]);
                    }
                }
            }
            OpKind::Measure => {
                let q = ins.qubits[0].0;
                let p1 = state.prob_one(q);
                let outcome = rng.gen::<f64>() < p1;
                state.collapse(q, outcome, if outcome { p1 } else { 1.0 - p1 });
                let recorded = outcome ^ (rng.gen::<f64>() < noise.p_meas);
                let c = ins.cbit.expect("measure has target").0;
                if recorded {
                    cbits |= 1 << c;
                } else {
                    cbits &= !(1 << c);
                }
            }
            OpKind::Reset => {
                let q = ins.qubits[0].0;
                let p1 = state.prob_one(q);
                let outcome = rng.gen::<f64>() < p1;
                state.collapse(q, outcome, if outcome { p1 } else { 1.0 - p1 });
                state.set_to_zero(q, outcome);
                if rng.gen::<f64>() < noise.p_reset {
                    state.apply_gate(Gate::X, &[q]);
                }
            }
            OpKind::Barrier => {}
        }
    }
    cbits
}

/// Samples `shots` executions of a circuit under the noise model. The result
/// is a histogram over the classical register (width = declared classical
/// bits) and is deterministic for fixed inputs regardless of parallelism.
pub fn sample(
    circuit: &Circuit,
    shots: u64,
    noise: &NoiseModel,
    seed: u64,
) -> Result<ShotHistogram, SimError> {
    noise.validate()?;
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let n = circuit.qubit_count();
    if n > MAX_QUBITS {
        return Err(SimError::TooManyQubits(n));
    }
    let width = circuit.cbit_count();

    // Fast path: gate-noiseless circuits whose only measurements are
    // terminal can be sampled directly from the final distribution.
    let stripped = circuit.strip_terminal_measurements();
    let pure_terminal = noise.is_noiseless_gates()
        && !stripped
            .instructions()
            .iter()
            .any(|i| i.is_measure() || i.is_reset());
    let counts: BTreeMap<u64, u64> = if pure_terminal {
        let state = simulate_state(&stripped)?;
        let probs = state.probabilities();
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cdf.push(acc);
        }
        let measures: Vec<(usize, usize)> = circuit
            .instructions()
            .iter()
            .filter(|i| i.is_measure())
            .map(|i| (i.qubits[0].0, i.cbit.expect("measure has target").0))
            .collect();
        (0..shots)
            .into_par_iter()
            .fold(BTreeMap::new, |mut acc: BTreeMap<u64, u64>, shot| {
                let mut rng = stream_rng(seed, shot);
                let u: f64 = rng.gen();
                let z = cdf.partition_point(|&c| c < u).min(probs.len() - 1);
                let mut cbits = 0u64;
                for &(q, c) in &measures {
                    let bit = (z >> q & 1 == 1) ^ (rng.gen::<f64>() < noise.p_meas);
                    if bit {
                        cbits |= 1 << c;
                    } else {
                        cbits &= !(1 << c);
                    }
                }
                *acc.entry(cbits).or_insert(0) += 1;
                acc
            })
            .reduce(BTreeMap::new, merge_counts)
    } else {
        (0..shots)
            .into_par_iter()
            .fold(BTreeMap::new, |mut acc: BTreeMap<u64, u64>, shot| {
                let key = run_trajectory(circuit, noise, seed, shot);
                *acc.entry(key).or_insert(0) += 1;
                acc
            })
            .reduce(BTreeMap::new, merge_counts)
    };
    Ok(ShotHistogram {
        width,
        shots,
        counts,
    })
}

fn merge_counts(mut a: BTreeMap<u64, u64>, b: BTreeMap<u64, u64>) -> BTreeMap<u64, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Samples the circuit and evaluates a diagonal observable on the histogram.
pub fn expectation_sampling(
    circuit: &Circuit,
    obs: &Observable,
    shots: u64,
    noise: &NoiseModel,
    seed: u64,
) -> Result<f64, SimError> {
    let hist = sample(circuit, shots, noise, seed)?;
    Ok(expectation_from_histogram(obs, &hist)?)
}
