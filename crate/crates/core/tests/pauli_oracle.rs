//! Dense-matrix oracles for the Pauli machinery: conjugation rules, the
//! shared-basis diagonalization, and statevector expectations are all
//! checked against explicit matrix arithmetic built from first principles.

use num_complex::Complex64;
use qbk_core::circuit::{Circuit, Gate, OpKind};
use qbk_core::pauli::{
    expectation_from_histogram, mermin_operator, pauli_commutes, per_term_basis_circuits,
    shared_basis_circuit, Observable, PauliOp, PauliString,
};
use qbk_core::rng::stream_rng;
use qbk_core::sim::{simulate_state, StateVector};
use qbk_core::testutil::random_circuit;
use rand::Rng;

type Mat = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn eye(n: usize) -> Mat {
    let mut m = vec![vec![c(0.0, 0.0); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c(1.0, 0.0);
    }
    m
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    let mut out = vec![vec![c(0.0, 0.0); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut s = c(0.0, 0.0);
            for t in 0..k {
                s += a[i][t] * b[t][j];
            }
            out[i][j] = s;
        }
    }
    out
}

fn dagger(a: &Mat) -> Mat {
    let n = a.len();
    let m = a[0].len();
    let mut out = vec![vec![c(0.0, 0.0); n]; m];
    for i in 0..n {
        for j in 0..m {
            out[j][i] = a[i][j].conj();
        }
    }
    out
}

/// Kronecker product in little-endian qubit order: qubit 0 is the least
/// significant index bit, so `kron(q1, q0)` in the usual convention becomes
/// an index-interleaved build here.
fn pauli_matrix_1q(op: PauliOp) -> Mat {
    match op {
        PauliOp::I => eye(2),
        PauliOp::X => vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]],
        PauliOp::Y => vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]],
        PauliOp::Z => vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]],
    }
}

fn pauli_matrix(p: &PauliString) -> Mat {
    let n = p.len();
    let dim = 1 << n;
    let mut out = vec![vec![c(0.0, 0.0); dim]; dim];
    for row in 0..dim {
        for col in 0..dim {
            let mut v = c(1.0, 0.0);
            for q in 0..n {
                let r = row >> q & 1;
                let cl = col >> q & 1;
                v *= pauli_matrix_1q(p.op(q))[r][cl];
                if v == c(0.0, 0.0) {
                    break;
                }
            }
            out[row][col] = v;
        }
    }
    out
}

/// Full unitary of a circuit, built column-by-column through the simulator.
fn circuit_matrix(circuit: &Circuit) -> Mat {
    let n = circuit.qubit_count();
    let dim = 1 << n;
    let mut out = vec![vec![c(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let mut amps = vec![c(0.0, 0.0); dim];
        amps[col] = c(1.0, 0.0);
        let mut state = StateVector::from_amplitudes(n, amps).unwrap();
        for ins in circuit.instructions() {
            if let OpKind::Gate(g) = ins.kind {
                let qs: Vec<usize> = ins.qubits.iter().map(|q| q.0).collect();
                state.apply_gate(g, &qs);
            }
        }
        for (row, a) in state.amplitudes().iter().enumerate() {
            out[row][col] = *a;
        }
    }
    out
}

/// Hand-built dense forms of the three diagonalizer gates, independent of
/// the simulator.
fn dense_gate(gate: Gate, qubits: &[usize], n: usize) -> Mat {
    let dim = 1 << n;
    let mut out = vec![vec![c(0.0, 0.0); dim]; dim];
    let f = std::f64::consts::FRAC_1_SQRT_2;
    match gate {
        Gate::H => {
            let q = qubits[0];
            for col in 0..dim {
                let base = col & !(1 << q);
                if col >> q & 1 == 0 {
                    out[base][col] = c(f, 0.0);
                    out[base | (1 << q)][col] = c(f, 0.0);
                } else {
                    out[base][col] = c(f, 0.0);
                    out[base | (1 << q)][col] = c(-f, 0.0);
                }
            }
        }
        Gate::S => {
            for col in 0..dim {
                out[col][col] = if col >> qubits[0] & 1 == 1 {
                    c(0.0, 1.0)
                } else {
                    c(1.0, 0.0)
                };
            }
        }
        Gate::Cx => {
            let (ctl, tgt) = (qubits[0], qubits[1]);
            for col in 0..dim {
                let row = if col >> ctl & 1 == 1 { col ^ (1 << tgt) } else { col };
                out[row][col] = c(1.0, 0.0);
            }
        }
        _ => unreachable!("oracle only needs H, S, CX"),
    }
    out
}

fn mat_approx_eq(a: &Mat, b: &Mat, tol: f64) -> bool {
    a.iter()
        .zip(b)
        .all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| (x - y).norm() < tol))
}

fn scale(a: &Mat, s: Complex64) -> Mat {
    a.iter()
        .map(|row| row.iter().map(|v| v * s).collect())
        .collect()
}

/// Checks `U P U^dag == sign * P'` for one gate and one Pauli word via the
/// public diagonalizer by embedding the word as a one-term observable and a
/// one-gate circuit is not possible, so this reconstructs the rule through
/// dense matrices on both sides of a conjugated observable.
#[test]
fn conjugation_rules_match_dense_matrices() {
    // every diagonalizer output is produced by sequences of H, S, CX; the
    // end-to-end identity below exercises all sign rules. Each mermin term
    // is conjugated by the emitted circuit and must equal the diagonal term
    // with its tracked sign.
    for n in 2..=4usize {
        let obs = mermin_operator(n).unwrap();
        let (circuit, diag) = shared_basis_circuit(&obs).unwrap();
        // dense unitary of the basis-change circuit, from hand-built gates
        let mut u = eye(1 << n);
        for ins in circuit.instructions() {
            let OpKind::Gate(g) = ins.kind else { panic!() };
            let qs: Vec<usize> = ins.qubits.iter().map(|q| q.0).collect();
            u = matmul(&dense_gate(g, &qs, n), &u);
        }
        let udag = dagger(&u);
        for ((c_in, p_in), (c_out, p_out)) in obs.terms().iter().zip(diag.terms()) {
            let lhs = matmul(&matmul(&u, &pauli_matrix(p_in)), &udag);
            let rhs = scale(&pauli_matrix(p_out), c(c_out / c_in, 0.0));
            assert!(
                mat_approx_eq(&lhs, &rhs, 1e-9),
                "n={n}: {p_in} -> {p_out} sign mismatch"
            );
        }
    }
}

#[test]
fn simulator_gates_match_hand_built_matrices() {
    for (gate, arity) in [(Gate::H, 1), (Gate::S, 1), (Gate::Cx, 2)] {
        let mut circ = Circuit::new();
        circ.add_qreg("q", 2).unwrap();
        let qs: Vec<usize> = (0..arity).collect();
        circ.push_gate(gate, &qs).unwrap();
        let via_sim = circuit_matrix(&circ);
        let direct = dense_gate(gate, &qs, 2);
        assert!(mat_approx_eq(&via_sim, &direct, 1e-12), "{gate:?}");
    }
}

fn random_state(n: usize, seed: u64) -> StateVector {
    let circuit = random_circuit(n, 25, false, seed);
    simulate_state(&circuit).unwrap()
}

fn dense_expectation(obs: &Observable, state: &StateVector) -> f64 {
    let dim = state.amplitudes().len();
    let mut total = c(0.0, 0.0);
    for (coef, p) in obs.terms() {
        let m = pauli_matrix(p);
        let mut e = c(0.0, 0.0);
        for row in 0..dim {
            for col in 0..dim {
                e += state.amplitudes()[row].conj() * m[row][col] * state.amplitudes()[col];
            }
        }
        total += e * c(*coef, 0.0);
    }
    total.re
}

fn diagonal_path_expectation(
    basis_change: &Circuit,
    diag: &Observable,
    state: &StateVector,
) -> f64 {
    let mut rotated = state.clone();
    for ins in basis_change.instructions() {
        let OpKind::Gate(g) = ins.kind else { panic!() };
        let qs: Vec<usize> = ins.qubits.iter().map(|q| q.0).collect();
        rotated.apply_gate(g, &qs);
    }
    let mut e = 0.0;
    for (z, amp) in rotated.amplitudes().iter().enumerate() {
        let p = amp.norm_sqr();
        for (coef, ps) in diag.terms() {
            let parity = (z as u64 & ps.z_mask()).count_ones() % 2;
            e += p * coef * if parity == 0 { 1.0 } else { -1.0 };
        }
    }
    e
}

#[test]
fn pauli_expectation_matches_dense_matrices() {
    let mut rng = stream_rng(400, 0);
    for trial in 0..20 {
        let n = rng.gen_range(1..=4usize);
        let state = random_state(n, 500 + trial);
        let letters = [PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z];
        let p = PauliString::new((0..n).map(|_| letters[rng.gen_range(0..4)]).collect());
        let obs = Observable::new(vec![(1.0, p.clone())]).unwrap();
        let dense = dense_expectation(&obs, &state);
        let fast = state.pauli_expectation(&p);
        assert!((dense - fast).abs() < 1e-9, "trial {trial}: {p}");
    }
}

#[test]
fn mermin_two_qubit_diagonalization_on_random_states() {
    let obs = mermin_operator(2).unwrap();
    let (basis_change, diag) = shared_basis_circuit(&obs).unwrap();
    for trial in 0..50 {
        let state = random_state(2, 1000 + trial);
        let direct = dense_expectation(&obs, &state);
        let via_diag = diagonal_path_expectation(&basis_change, &diag, &state);
        assert!(
            (direct - via_diag).abs() < 1e-9,
            "trial {trial}: {direct} vs {via_diag}"
        );
    }
}

/// Random commuting observables built independently of the tableau code:
/// a random diagonal observable conjugated by a random Clifford circuit via
/// dense matrices, decomposed back into Pauli terms by trace inner products.
#[test]
fn random_commuting_observables_diagonalize_correctly() {
    let mut rng = stream_rng(77, 0);
    for trial in 0..12 {
        let n = rng.gen_range(2..=5usize);
        let dim = 1usize << n;
        // random diagonal seed observable
        let n_terms = rng.gen_range(1..=4usize);
        let mut seed_terms: Vec<(f64, PauliString)> = Vec::new();
        let mut used = std::collections::BTreeSet::new();
        for _ in 0..n_terms {
            let mask = rng.gen_range(1..dim) as u64;
            if !used.insert(mask) {
                continue;
            }
            let ops = (0..n)
                .map(|q| {
                    if mask >> q & 1 == 1 {
                        PauliOp::Z
                    } else {
                        PauliOp::I
                    }
                })
                .collect();
            seed_terms.push((rng.gen_range(-2.0..2.0), PauliString::new(ops)));
        }
        // random Clifford over H, S, CX
        let mut clifford = Circuit::new();
        clifford.add_qreg("q", n).unwrap();
        for _ in 0..rng.gen_range(5..20) {
            match rng.gen_range(0..3u8) {
                0 => clifford.push_gate(Gate::H, &[rng.gen_range(0..n)]).unwrap(),
                1 => clifford.push_gate(Gate::S, &[rng.gen_range(0..n)]).unwrap(),
                _ => {
                    if n >= 2 {
                        let a = rng.gen_range(0..n);
                        let mut b = rng.gen_range(0..n);
                        while b == a {
                            b = rng.gen_range(0..n);
                        }
                        clifford.push_gate(Gate::Cx, &[a, b]).unwrap();
                    }
                }
            }
        }
        let u = circuit_matrix(&clifford);
        let udag = dagger(&u);
        // conjugate each seed term and decompose back into a signed Pauli
        let mut terms = Vec::new();
        for (coef, p) in &seed_terms {
            let m = matmul(&matmul(&u, &pauli_matrix(p)), &udag);
            let mut found = None;
            'outer: for mask in 0..(1u64 << (2 * n)) {
                let ops: Vec<PauliOp> = (0..n)
                    .map(|q| match (mask >> (2 * q)) & 3 {
                        0 => PauliOp::I,
                        1 => PauliOp::X,
                        2 => PauliOp::Y,
                        _ => PauliOp::Z,
                    })
                    .collect();
                let cand = PauliString::new(ops);
                let pm = pauli_matrix(&cand);
                for sign in [1.0f64, -1.0] {
                    if mat_approx_eq(&m, &scale(&pm, c(sign, 0.0)), 1e-9) {
                        found = Some((sign, cand));
                        break 'outer;
                    }
                }
            }
            let (sign, cand) = found.expect("conjugated Pauli decomposes");
            terms.push((coef * sign, cand));
        }
        let Ok(obs) = Observable::new(terms) else {
            continue; // duplicate strings after conjugation; skip the trial
        };
        for i in 0..obs.terms().len() {
            for j in (i + 1)..obs.terms().len() {
                assert!(pauli_commutes(&obs.terms()[i].1, &obs.terms()[j].1).unwrap());
            }
        }
        let (basis_change, diag) = shared_basis_circuit(&obs).unwrap();
        assert!(diag.is_diagonal());
        let state = random_state(n, 2000 + trial);
        let direct = dense_expectation(&obs, &state);
        let via_diag = diagonal_path_expectation(&basis_change, &diag, &state);
        assert!(
            (direct - via_diag).abs() < 1e-9,
            "trial {trial} (n={n}): {direct} vs {via_diag}"
        );
    }
}

/// The per-term fallback and the shared-basis route must agree when both
/// are evaluated exactly.
#[test]
fn per_term_fallback_cross_validates_shared_basis() {
    for n in 2..=4usize {
        let obs = mermin_operator(n).unwrap();
        let state = random_state(n, 3000 + n as u64);
        let (basis_change, diag) = shared_basis_circuit(&obs).unwrap();
        let shared = diagonal_path_expectation(&basis_change, &diag, &state);
        let mut per_term = 0.0;
        for (circuit, single) in per_term_basis_circuits(&obs).unwrap() {
            per_term += diagonal_path_expectation(&circuit, &single, &state);
        }
        assert!(
            (shared - per_term).abs() < 1e-9,
            "n={n}: shared {shared} vs per-term {per_term}"
        );
    }
}

/// End to end: a sampled histogram of the diagonalized Mermin circuit feeds
/// expectation_from_histogram, which must reproduce the exact value on the
/// noiseless prepared state.
#[test]
fn histogram_expectation_agrees_with_exact_path() {
    use qbk_core::bench::mermin_bell_instance;
    use qbk_core::sim::{sample, NoiseModel};
    let inst = mermin_bell_instance(3).unwrap();
    let qbk_core::bench::IdealPayload::PauliExpectation { observable, value } = &inst.ideal
    else {
        panic!()
    };
    let hist = sample(&inst.circuits[0], 4000, &NoiseModel::noiseless(), 55).unwrap();
    let est = expectation_from_histogram(observable, &hist).unwrap();
    assert!((est - value).abs() < 1e-9, "est {est} vs {value}");
}
