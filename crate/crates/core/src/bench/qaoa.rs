//! Level-one QAOA for MaxCut on the Sherrington-Kirkpatrick model, in two
//! ansatz variants: the all-to-all "vanilla" form and a linear-depth
//! ZZ-SWAP network. Parameters are pre-optimized on the noiseless simulator
//! and the score compares measured against ideal cost expectation.

use super::{BenchError, BenchmarkInstance, Family, FamilyParams, IdealPayload};
use crate::circuit::{Circuit, Gate};
use crate::pauli::{Observable, PauliOp, PauliString};
use crate::rng::{derive_seed, hash_str, mix64};
use crate::sim::simulate_state;

/// Guard for the classical parameter optimization.
pub const QAOA_MAX_QUBITS: usize = 16;
/// Below this magnitude of the ideal expectation the score is undefined.
pub const SCORE_GUARD: f64 = 1e-6;

/// A complete graph with `{-1, +1}` edge weights, reproducible from the
/// seed. Weights are keyed by `(family, n, seed, pair index)` so instances
/// are identical across platforms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkInstance {
    pub n: usize,
    pub seed: u64,
    weights: Vec<i8>,
}

impl SkInstance {
    pub fn pair_count(&self) -> usize {
        self.weights.len()
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        // index within the lexicographic (i, j) enumeration
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn weight(&self, i: usize, j: usize) -> i8 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.weights[self.pair_index(a, b)]
    }

    /// All `(i, j, w)` triples with `i < j` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        (0..self.n).flat_map(move |i| {
            ((i + 1)..self.n).map(move |j| (i, j, self.weight(i, j)))
        })
    }

    pub fn weights(&self) -> &[i8] {
        &self.weights
    }
}

/// Draws an SK instance: one uniform sign per pair from a counter-based
/// stream keyed by `(family tag, n, seed)`.
pub fn sk_instance(n: usize, seed: u64) -> SkInstance {
    let key = derive_seed(&[hash_str("sk"), n as u64, seed]);
    let pairs = n * (n - 1) / 2;
    let weights = (0..pairs)
        .map(|idx| {
            if mix64(key ^ mix64(idx as u64 + 1)) & 1 == 0 {
                1i8
            } else {
                -1i8
            }
        })
        .collect();
    SkInstance { n, seed, weights }
}

/// Level-one QAOA angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QaoaParams {
    pub gamma: f64,
    pub beta: f64,
}

/// The SK cost observable `sum_{i<j} w_ij Z_i Z_j` on the identity qubit
/// labeling.
pub fn sk_observable(sk: &SkInstance) -> Result<Observable, BenchError> {
    sk_observable_permuted(sk, &(0..sk.n).collect::<Vec<_>>())
}

/// The SK cost observable with logical qubit `q` located on wire `wire[q]`.
fn sk_observable_permuted(sk: &SkInstance, wire: &[usize]) -> Result<Observable, BenchError> {
    let terms = sk
        .edges()
        .map(|(i, j, w)| {
            let mut ops = vec![PauliOp::I; sk.n];
            ops[wire[i]] = PauliOp::Z;
            ops[wire[j]] = PauliOp::Z;
            (w as f64, PauliString::new(ops))
        })
        .collect();
    Ok(Observable::new(terms)?)
}

fn vanilla_ansatz(sk: &SkInstance, params: &QaoaParams, measure: bool) -> Result<Circuit, BenchError> {
    let n = sk.n;
    let mut c = Circuit::new();
    c.add_qreg("q", n)?;
    if measure {
        c.add_creg("c", n)?;
    }
    for q in 0..n {
        c.push_gate(Gate::H, &[q])?;
    }
    for (i, j, w) in sk.edges() {
        c.push_gate(Gate::Rzz(2.0 * params.gamma * w as f64), &[i, j])?;
    }
    for q in 0..n {
        c.push_gate(Gate::Rx(2.0 * params.beta), &[q])?;
    }
    if measure {
        for q in 0..n {
            c.measure(q, q)?;
        }
    }
    Ok(c)
}

/// Vanilla ansatz: H layer, one RZZ per pair, RX mixer, terminal measurement.
pub fn qaoa_vanilla_circuit(sk: &SkInstance, params: &QaoaParams) -> Result<Circuit, BenchError> {
    vanilla_ansatz(sk, params, true)
}

fn zzswap_ansatz(
    sk: &SkInstance,
    params: &QaoaParams,
    measure: bool,
) -> Result<(Circuit, Vec<usize>), BenchError> {
    let n = sk.n;
    let mut c = Circuit::new();
    c.add_qreg("q", n)?;
    if measure {
        c.add_creg("c", n)?;
    }
    for q in 0..n {
        c.push_gate(Gate::H, &[q])?;
    }
    // odd-even transposition network: after n layers every pair has
    // interacted exactly once and the line order is reversed
    let mut holds: Vec<usize> = (0..n).collect(); // wire -> logical qubit
    for layer in 0..n {
        let start = layer % 2;
        let mut wire = start;
        while wire + 1 < n {
            let (u, v) = (holds[wire], holds[wire + 1]);
            let w = sk.weight(u, v);
            c.push_gate(Gate::Rzz(2.0 * params.gamma * w as f64), &[wire, wire + 1])?;
            c.push_gate(Gate::Swap, &[wire, wire + 1])?;
            holds.swap(wire, wire + 1);
            wire += 2;
        }
    }
    for q in 0..n {
        c.push_gate(Gate::Rx(2.0 * params.beta), &[q])?;
    }
    if measure {
        for q in 0..n {
            c.measure(q, q)?;
        }
    }
    // wire[logical] = final wire of each logical qubit
    let mut wire_of = vec![0usize; n];
    for (w, &logical) in holds.iter().enumerate() {
        wire_of[logical] = w;
    }
    Ok((c, wire_of))
}

/// SWAP-network ansatz: alternating even/odd layers of RZZ+SWAP blocks on
/// adjacent wires, tracking the permutation so every pair interacts exactly
/// once with its own weight, then the RX mixer and terminal measurement.
pub fn qaoa_zzswap_circuit(sk: &SkInstance, params: &QaoaParams) -> Result<Circuit, BenchError> {
    Ok(zzswap_ansatz(sk, params, true)?.0)
}

/// Final wire position of each logical qubit in the ZZ-SWAP network.
pub fn zzswap_final_wires(n: usize) -> Vec<usize> {
    let sk = sk_instance(n, 0);
    let params = QaoaParams { gamma: 0.0, beta: 0.0 };
    zzswap_ansatz(&sk, &params, false)
        .expect("network construction is infallible for valid n")
        .1
}

fn ideal_expectation(sk: &SkInstance, params: &QaoaParams) -> Result<f64, BenchError> {
    let c = vanilla_ansatz(sk, params, false)?;
    let state = simulate_state(&c)?;
    Ok(state.observable_expectation(&sk_observable(sk)?))
}

/// Grid search (64 x 64 over `[-pi/2, pi/2]^2`) followed by deterministic
/// pattern refinement down to 1e-4 resolution. The result achieves a cost
/// expectation no larger than any grid point's.
pub fn optimize_qaoa_params(sk: &SkInstance) -> Result<QaoaParams, BenchError> {
    if sk.n > QAOA_MAX_QUBITS {
        return Err(BenchError::SizeGuard {
            limit: QAOA_MAX_QUBITS,
            got: sk.n,
        });
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let grid = 64usize;
    let step = std::f64::consts::PI / (grid as f64 - 1.0);
    let mut best = (f64::INFINITY, QaoaParams { gamma: 0.0, beta: 0.0 });
    for gi in 0..grid {
        let gamma = -half_pi + gi as f64 * step;
        for bi in 0..grid {
            let beta = -half_pi + bi as f64 * step;
            let p = QaoaParams { gamma, beta };
            let e = ideal_expectation(sk, &p)?;
            if e < best.0 {
                best = (e, p);
            }
        }
    }
    // coordinate pattern search around the best grid point
    let (mut e_best, mut p_best) = best;
    let mut span = step;
    while span > 1e-4 {
        let mut improved = false;
        for coord in 0..2 {
            for dir in [-1.0, 1.0] {
                let mut cand = p_best;
                if coord == 0 {
                    cand.gamma += dir * span;
                } else {
                    cand.beta += dir * span;
                }
                let e = ideal_expectation(sk, &cand)?;
                if e < e_best {
                    e_best = e;
                    p_best = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            span /= 2.0;
        }
    }
    Ok(p_best)
}

/// QAOA score `1 - |(ideal - exp) / (2 ideal)|`, clamped to `[0, 1]`.
/// Ideal values below the guard are rejected so the caller can regenerate
/// the instance under a new seed.
pub fn qaoa_score(exp_val: f64, ideal_val: f64) -> Result<f64, BenchError> {
    if ideal_val.abs() < SCORE_GUARD {
        return Err(BenchError::ScoreUndefined(ideal_val.abs()));
    }
    Ok((1.0 - ((ideal_val - exp_val) / (2.0 * ideal_val)).abs()).clamp(0.0, 1.0))
}

/// Finds the first seed in `seed, seed+1, ...` whose optimized instance has
/// a usable ideal expectation.
fn usable_sk(n: usize, seed: u64) -> Result<(SkInstance, QaoaParams, f64), BenchError> {
    const ATTEMPTS: u32 = 32;
    for attempt in 0..ATTEMPTS {
        let sk = sk_instance(n, seed + attempt as u64);
        let params = optimize_qaoa_params(&sk)?;
        let ideal = ideal_expectation(&sk, &params)?;
        if ideal.abs() >= SCORE_GUARD {
            return Ok((sk, params, ideal));
        }
    }
    Err(BenchError::SeedExhausted(ATTEMPTS))
}

pub fn qaoa_vanilla_instance(n: usize, seed: u64) -> Result<BenchmarkInstance, BenchError> {
    if n < 2 {
        return Err(BenchError::TooSmall(n));
    }
    let (sk, params, ideal) = usable_sk(n, seed)?;
    let circuit = qaoa_vanilla_circuit(&sk, &params)?;
    Ok(BenchmarkInstance {
        id: format!("qaoa_vanilla-n{n}-s{}", sk.seed),
        family: Family::QaoaVanilla,
        size: n,
        seed: sk.seed,
        params: FamilyParams::Qaoa {
            sk_seed: sk.seed,
            weights: sk.weights().to_vec(),
            gamma: params.gamma,
            beta: params.beta,
        },
        circuits: vec![circuit],
        ideal: IdealPayload::PauliExpectation {
            observable: sk_observable(&sk)?,
            value: ideal,
        },
    })
}

pub fn qaoa_zzswap_instance(n: usize, seed: u64) -> Result<BenchmarkInstance, BenchError> {
    if n < 2 {
        return Err(BenchError::TooSmall(n));
    }
    let (sk, params, _) = usable_sk(n, seed)?;
    let (circuit, wire_of) = zzswap_ansatz(&sk, &params, true)?;
    let observable = sk_observable_permuted(&sk, &wire_of)?;
    // own ideal value, computed on the network circuit itself
    let state = simulate_state(&zzswap_ansatz(&sk, &params, false)?.0)?;
    let ideal = state.observable_expectation(&observable);
    if ideal.abs() < SCORE_GUARD {
        return Err(BenchError::ScoreUndefined(ideal.abs()));
    }
    Ok(BenchmarkInstance {
        id: format!("qaoa_zzswap-n{n}-s{}", sk.seed),
        family: Family::QaoaZzswap,
        size: n,
        seed: sk.seed,
        params: FamilyParams::Qaoa {
            sk_seed: sk.seed,
            weights: sk.weights().to_vec(),
            gamma: params.gamma,
            beta: params.beta,
        },
        circuits: vec![circuit],
        ideal: IdealPayload::PauliExpectation {
            observable,
            value: ideal,
        },
    })
}
