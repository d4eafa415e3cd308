//! The six hardware-agnostic application features of a circuit: program
//! communication, critical depth, entanglement ratio, parallelism, liveness,
//! and measurement.
//!
//! Every feature is computed on the terminal-measurement-stripped circuit;
//! the public per-feature functions strip internally, while
//! [`compute_features`] strips once and reuses the result. `n` is the number
//! of declared qubits, mid-circuit measurements and resets count as gates and
//! as liveness occupancy, and barriers count for neither.

use crate::circuit::{dependency_dag, schedule_moments, Circuit};
use serde::{Deserialize, Serialize};

/// The six metrics for one circuit, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub communication: f64,
    pub critical_depth: f64,
    pub entanglement: f64,
    pub parallelism: f64,
    pub liveness: f64,
    pub measurement: f64,
}

impl FeatureVector {
    pub const AXES: [&'static str; 6] = [
        "communication",
        "critical_depth",
        "entanglement",
        "parallelism",
        "liveness",
        "measurement",
    ];

    pub fn as_array(&self) -> [f64; 6] {
        [
            self.communication,
            self.critical_depth,
            self.entanglement,
            self.parallelism,
            self.liveness,
            self.measurement,
        ]
    }
}

/// Raw structural counts reported alongside the normalized features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMetrics {
    pub qubits: usize,
    pub depth: usize,
    pub gate_count: usize,
    pub two_qubit_gates: usize,
}

/// Average interaction-graph degree over the complete-graph degree.
pub fn program_communication(circuit: &Circuit) -> f64 {
    communication_stripped(&circuit.strip_terminal_measurements())
}

/// Fraction of two-qubit gates lying on a critical path of the DAG.
pub fn critical_depth(circuit: &Circuit) -> f64 {
    critical_depth_stripped(&circuit.strip_terminal_measurements())
}

/// Fraction of gate operations that are two-qubit gates.
pub fn entanglement_ratio(circuit: &Circuit) -> f64 {
    entanglement_stripped(&circuit.strip_terminal_measurements())
}

/// `(n_g / d - 1) / (n - 1)`, clamped to `[0, 1]`.
pub fn parallelism(circuit: &Circuit) -> f64 {
    parallelism_stripped(&circuit.strip_terminal_measurements())
}

/// Fraction of qubit-moment slots occupied by non-barrier instructions.
pub fn liveness(circuit: &Circuit) -> f64 {
    liveness_stripped(&circuit.strip_terminal_measurements())
}

/// Fraction of moments containing a measurement or reset.
pub fn measurement_ratio(circuit: &Circuit) -> f64 {
    measurement_stripped(&circuit.strip_terminal_measurements())
}

/// All six features, stripping terminal measurements once.
pub fn compute_features(circuit: &Circuit) -> FeatureVector {
    let s = circuit.strip_terminal_measurements();
    FeatureVector {
        communication: communication_stripped(&s),
        critical_depth: critical_depth_stripped(&s),
        entanglement: entanglement_stripped(&s),
        parallelism: parallelism_stripped(&s),
        liveness: liveness_stripped(&s),
        measurement: measurement_stripped(&s),
    }
}

/// Raw counts of the stripped circuit, for reporting and extra analysis axes.
pub fn raw_metrics(circuit: &Circuit) -> RawMetrics {
    let s = circuit.strip_terminal_measurements();
    RawMetrics {
        qubits: s.qubit_count(),
        depth: schedule_moments(&s).depth(),
        gate_count: gate_count(&s),
        two_qubit_gates: two_qubit_count(&s),
    }
}

fn gate_count(c: &Circuit) -> usize {
    c.instructions().iter().filter(|i| !i.is_barrier()).count()
}

fn two_qubit_count(c: &Circuit) -> usize {
    c.instructions()
        .iter()
        .filter(|i| i.is_two_qubit_gate())
        .count()
}

fn communication_stripped(c: &Circuit) -> f64 {
    let n = c.qubit_count();
    if n < 2 {
        return 0.0;
    }
    let g = crate::circuit::interaction_graph(c);
    g.degree_sum() as f64 / (n * (n - 1)) as f64
}

fn critical_depth_stripped(c: &Circuit) -> f64 {
    let n_e = two_qubit_count(c);
    if n_e == 0 {
        return 0.0;
    }
    let dag = dependency_dag(c);
    // Two-key longest path: node count first, two-qubit count second, so the
    // reported count is the maximum over all node-count-maximal paths.
    let mut best: Vec<(usize, usize)> = vec![(0, 0); dag.node_count()];
    let mut max = (0usize, 0usize);
    for (v, ins) in c.instructions().iter().enumerate() {
        let inc = usize::from(ins.is_two_qubit_gate());
        let base = dag
            .predecessors(v)
            .iter()
            .map(|&u| best[u])
            .max()
            .unwrap_or((0, 0));
        best[v] = (base.0 + 1, base.1 + inc);
        max = max.max(best[v]);
    }
    max.1 as f64 / n_e as f64
}

fn entanglement_stripped(c: &Circuit) -> f64 {
    let n_g = gate_count(c);
    if n_g == 0 {
        return 0.0;
    }
    two_qubit_count(c) as f64 / n_g as f64
}

fn parallelism_stripped(c: &Circuit) -> f64 {
    let n = c.qubit_count();
    let d = schedule_moments(c).depth();
    if n <= 1 || d == 0 {
        return 0.0;
    }
    let p = (gate_count(c) as f64 / d as f64 - 1.0) / (n - 1) as f64;
    p.clamp(0.0, 1.0)
}

fn liveness_stripped(c: &Circuit) -> f64 {
    let n = c.qubit_count();
    let sched = schedule_moments(c);
    let d = sched.depth();
    if n == 0 || d == 0 {
        return 0.0;
    }
    let mut busy = 0usize;
    for ins in c.instructions() {
        if !ins.is_barrier() {
            busy += ins.qubits.len();
        }
    }
    busy as f64 / (n * d) as f64
}

fn measurement_stripped(c: &Circuit) -> f64 {
    let sched = schedule_moments(c);
    let d = sched.depth();
    if d == 0 {
        return 0.0;
    }
    let mcm = sched
        .moments()
        .iter()
        .filter(|ids| {
            ids.iter()
                .any(|&i| c.instructions()[i].is_measure() || c.instructions()[i].is_reset())
        })
        .count();
    mcm as f64 / d as f64
}
