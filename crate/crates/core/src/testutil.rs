//! Seeded random-circuit generation and order-preserving shuffles, shared by
//! the property and acceptance suites. Not part of the stable API.

use crate::circuit::{Circuit, Gate, Instruction};
use crate::rng::stream_rng;
use rand::seq::SliceRandom;
use rand::Rng;

/// A random circuit over the supported gate set. With `with_dynamics` the
/// circuit may also contain measurements, resets, and barriers; a classical
/// register of matching width is always declared.
pub fn random_circuit(n_qubits: usize, n_instructions: usize, with_dynamics: bool, seed: u64) -> Circuit {
    let mut rng = stream_rng(seed, 0);
    let mut c = Circuit::new();
    c.add_qreg("q", n_qubits).unwrap();
    c.add_creg("c", n_qubits).unwrap();
    for _ in 0..n_instructions {
        let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let roll: f64 = rng.gen();
        if with_dynamics && roll < 0.12 {
            let q = rng.gen_range(0..n_qubits);
            match rng.gen_range(0..3u8) {
                0 => c.measure(q, q).unwrap(),
                1 => c.reset(q).unwrap(),
                _ => {
                    let mut qs: Vec<usize> = (0..n_qubits).collect();
                    qs.shuffle(&mut rng);
                    let k = rng.gen_range(1..=n_qubits);
                    qs.truncate(k);
                    qs.sort_unstable();
                    c.barrier(&qs).unwrap();
                }
            }
            continue;
        }
        let one_qubit = [
            Gate::H,
            Gate::X,
            Gate::Y,
            Gate::Z,
            Gate::S,
            Gate::Sdg,
            Gate::T,
            Gate::Tdg,
            Gate::Rx(angle),
            Gate::Ry(angle),
            Gate::Rz(angle),
        ];
        let two_qubit = [Gate::Cx, Gate::Cz, Gate::Swap, Gate::Rzz(angle)];
        if n_qubits >= 2 && rng.gen::<f64>() < 0.45 {
            let g = two_qubit[rng.gen_range(0..two_qubit.len())];
            let a = rng.gen_range(0..n_qubits);
            let mut b = rng.gen_range(0..n_qubits);
            while b == a {
                b = rng.gen_range(0..n_qubits);
            }
            c.push_gate(g, &[a, b]).unwrap();
        } else {
            let g = one_qubit[rng.gen_range(0..one_qubit.len())];
            c.push_gate(g, &[rng.gen_range(0..n_qubits)]).unwrap();
        }
    }
    c
}

/// Randomly reorders instructions while preserving per-qubit order: at each
/// step one instruction whose per-qubit predecessors were already emitted is
/// chosen at random.
pub fn reorder_preserving_qubit_order(circuit: &Circuit, seed: u64) -> Circuit {
    let mut rng = stream_rng(seed, 1);
    let instructions = circuit.instructions();
    let dag = crate::circuit::dependency_dag(circuit);
    let mut remaining_preds: Vec<usize> = (0..instructions.len())
        .map(|i| dag.predecessors(i).len())
        .collect();
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); instructions.len()];
    for (u, v) in dag.edges() {
        succs[u].push(v);
    }
    let mut ready: Vec<usize> = (0..instructions.len())
        .filter(|&i| remaining_preds[i] == 0)
        .collect();
    let mut order = Vec::with_capacity(instructions.len());
    while !ready.is_empty() {
        let pick = rng.gen_range(0..ready.len());
        let i = ready.swap_remove(pick);
        order.push(i);
        for &s in &succs[i] {
            remaining_preds[s] -= 1;
            if remaining_preds[s] == 0 {
                ready.push(s);
            }
        }
    }
    assert_eq!(order.len(), instructions.len());
    let mut out = Circuit::new();
    for r in circuit.qregs() {
        out.add_qreg(&r.name, r.size).unwrap();
    }
    for r in circuit.cregs() {
        out.add_creg(&r.name, r.size).unwrap();
    }
    for i in order {
        out.push(instructions[i].clone()).unwrap();
    }
    out
}

/// Applies a qubit relabeling permutation to a circuit (single flat register).
pub fn relabel_qubits(circuit: &Circuit, perm: &[usize]) -> Circuit {
    let mut out = Circuit::new();
    for r in circuit.qregs() {
        out.add_qreg(&r.name, r.size).unwrap();
    }
    for r in circuit.cregs() {
        out.add_creg(&r.name, r.size).unwrap();
    }
    for ins in circuit.instructions() {
        let mapped = Instruction {
            kind: ins.kind.clone(),
            qubits: ins
                .qubits
                .iter()
                .map(|q| crate::circuit::Qubit(perm[q.0]))
                .collect(),
            cbit: ins.cbit,
        };
        out.push(mapped).unwrap();
    }
    out
}
