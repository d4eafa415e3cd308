//! Circuit intermediate representation: registers, instructions, ASAP moment
//! scheduling, the qubit interaction graph, and the instruction dependency DAG.
//!
//! Conventions used throughout the crate:
//! - Qubits and classical bits are addressed by flat indices in declaration
//!   order; register names exist for I/O and diagnostics.
//! - `n` (the qubit count entering the feature formulas) is the number of
//!   *declared* qubits.
//! - Barriers are schedule-only: they occupy their qubits for one moment but
//!   never count as gates or as liveness occupancy.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Flat qubit index within a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Qubit(pub usize);

/// Flat classical bit index within a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cbit(pub usize);

/// A named qubit reference: register name plus element index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitId {
    pub register: String,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub size: usize,
}

/// The supported unitary gate set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    Cx,
    Cz,
    Swap,
    Rzz(f64),
}

impl Gate {
    /// Number of qubit operands.
    pub fn arity(&self) -> usize {
        match self {
            Gate::Cx | Gate::Cz | Gate::Swap | Gate::Rzz(_) => 2,
            _ => 1,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.arity() == 2
    }

    /// Lower-case OpenQASM name.
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H => "h",
            Gate::X => "x",
            Gate::Y => "y",
            Gate::Z => "z",
            Gate::S => "s",
            Gate::Sdg => "sdg",
            Gate::T => "t",
            Gate::Tdg => "tdg",
            Gate::Rx(_) => "rx",
            Gate::Ry(_) => "ry",
            Gate::Rz(_) => "rz",
            Gate::Cx => "cx",
            Gate::Cz => "cz",
            Gate::Swap => "swap",
            Gate::Rzz(_) => "rzz",
        }
    }

    /// Rotation angle, for the parameterized gates.
    pub fn param(&self) -> Option<f64> {
        match self {
            Gate::Rx(t) | Gate::Ry(t) | Gate::Rz(t) | Gate::Rzz(t) => Some(*t),
            _ => None,
        }
    }
}

/// Instruction kinds beyond plain unitaries.
#[derive(Debug, Clone, PartialEq)]
pub enum OpKind {
    Gate(Gate),
    Measure,
    Reset,
    Barrier,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub kind: OpKind,
    pub qubits: Vec<Qubit>,
    /// Classical target; present exactly for measurements.
    pub cbit: Option<Cbit>,
}

impl Instruction {
    pub fn is_measure(&self) -> bool {
        matches!(self.kind, OpKind::Measure)
    }

    pub fn is_reset(&self) -> bool {
        matches!(self.kind, OpKind::Reset)
    }

    pub fn is_barrier(&self) -> bool {
        matches!(self.kind, OpKind::Barrier)
    }

    pub fn is_two_qubit_gate(&self) -> bool {
        matches!(self.kind, OpKind::Gate(g) if g.is_two_qubit())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("register '{0}' already declared")]
    DuplicateRegister(String),
    #[error("qubit index {0} out of range ({1} declared)")]
    QubitOutOfRange(usize, usize),
    #[error("classical bit index {0} out of range ({1} declared)")]
    CbitOutOfRange(usize, usize),
    #[error("duplicate qubit operand {0}")]
    DuplicateQubit(usize),
    #[error("gate '{gate}' expects {expected} qubit(s), got {got}")]
    BadArity {
        gate: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("measurement requires a classical target")]
    MissingClassicalTarget,
    #[error("only measurements may carry a classical target")]
    UnexpectedClassicalTarget,
    #[error("gate parameter must be finite")]
    NonFiniteParam,
    #[error("barrier requires at least one qubit")]
    EmptyBarrier,
    #[error("appended circuit uses {0} qubits but target declares {1}")]
    AppendTooWide(usize, usize),
    #[error("appended circuit must be measurement- and reset-free")]
    AppendNotUnitary,
}

/// Ordered instruction list over named qubit/classical registers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    qregs: Vec<Register>,
    cregs: Vec<Register>,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_qreg(&mut self, name: &str, size: usize) -> Result<(), CircuitError> {
        if self.qregs.iter().any(|r| r.name == name) || self.cregs.iter().any(|r| r.name == name) {
            return Err(CircuitError::DuplicateRegister(name.to_string()));
        }
        self.qregs.push(Register {
            name: name.to_string(),
            size,
        });
        Ok(())
    }

    pub fn add_creg(&mut self, name: &str, size: usize) -> Result<(), CircuitError> {
        if self.qregs.iter().any(|r| r.name == name) || self.cregs.iter().any(|r| r.name == name) {
            return Err(CircuitError::DuplicateRegister(name.to_string()));
        }
        self.cregs.push(Register {
            name: name.to_string(),
            size,
        });
        Ok(())
    }

    pub fn qubit_count(&self) -> usize {
        self.qregs.iter().map(|r| r.size).sum()
    }

    pub fn cbit_count(&self) -> usize {
        self.cregs.iter().map(|r| r.size).sum()
    }

    pub fn qregs(&self) -> &[Register] {
        &self.qregs
    }

    pub fn cregs(&self) -> &[Register] {
        &self.cregs
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Resolves a flat qubit index to its `(register, element)` name.
    pub fn qubit_id(&self, q: Qubit) -> Option<QubitId> {
        let mut base = 0;
        for r in &self.qregs {
            if q.0 < base + r.size {
                return Some(QubitId {
                    register: r.name.clone(),
                    index: q.0 - base,
                });
            }
            base += r.size;
        }
        None
    }

    /// Resolves a flat classical index to its `(register, element)` name.
    pub fn cbit_id(&self, c: Cbit) -> Option<QubitId> {
        let mut base = 0;
        for r in &self.cregs {
            if c.0 < base + r.size {
                return Some(QubitId {
                    register: r.name.clone(),
                    index: c.0 - base,
                });
            }
            base += r.size;
        }
        None
    }

    /// Flat index of `register[index]`, if declared.
    pub fn find_qubit(&self, register: &str, index: usize) -> Option<Qubit> {
        let mut base = 0;
        for r in &self.qregs {
            if r.name == register {
                return (index < r.size).then_some(Qubit(base + index));
            }
            base += r.size;
        }
        None
    }

    pub fn find_cbit(&self, register: &str, index: usize) -> Option<Cbit> {
        let mut base = 0;
        for r in &self.cregs {
            if r.name == register {
                return (index < r.size).then_some(Cbit(base + index));
            }
            base += r.size;
        }
        None
    }

    fn validate(&self, ins: &Instruction) -> Result<(), CircuitError> {
        let nq = self.qubit_count();
        let mut seen = BTreeSet::new();
        for q in &ins.qubits {
            if q.0 >= nq {
                return Err(CircuitError::QubitOutOfRange(q.0, nq));
            }
            if !seen.insert(q.0) {
                return Err(CircuitError::DuplicateQubit(q.0));
            }
        }
        match &ins.kind {
            OpKind::Gate(g) => {
                if ins.qubits.len() != g.arity() {
                    return Err(CircuitError::BadArity {
                        gate: g.name(),
                        expected: g.arity(),
                        got: ins.qubits.len(),
                    });
                }
                if let Some(t) = g.param() {
                    if !t.is_finite() {
                        return Err(CircuitError::NonFiniteParam);
                    }
                }
                if ins.cbit.is_some() {
                    return Err(CircuitError::UnexpectedClassicalTarget);
                }
            }
            OpKind::Measure => {
                if ins.qubits.len() != 1 {
                    return Err(CircuitError::BadArity {
                        gate: "measure",
                        expected: 1,
                        got: ins.qubits.len(),
                    });
                }
                let c = ins.cbit.ok_or(CircuitError::MissingClassicalTarget)?;
                if c.0 >= self.cbit_count() {
                    return Err(CircuitError::CbitOutOfRange(c.0, self.cbit_count()));
                }
            }
            OpKind::Reset => {
                if ins.qubits.len() != 1 {
                    return Err(CircuitError::BadArity {
                        gate: "reset",
                        expected: 1,
                        got: ins.qubits.len(),
                    });
                }
                if ins.cbit.is_some() {
                    return Err(CircuitError::UnexpectedClassicalTarget);
                }
            }
            OpKind::Barrier => {
                if ins.qubits.is_empty() {
                    return Err(CircuitError::EmptyBarrier);
                }
                if ins.cbit.is_some() {
                    return Err(CircuitError::UnexpectedClassicalTarget);
                }
            }
        }
        Ok(())
    }

    pub fn push(&mut self, ins: Instruction) -> Result<(), CircuitError> {
        self.validate(&ins)?;
        self.instructions.push(ins);
        Ok(())
    }

    pub fn push_gate(&mut self, gate: Gate, qubits: &[usize]) -> Result<(), CircuitError> {
        self.push(Instruction {
            kind: OpKind::Gate(gate),
            qubits: qubits.iter().map(|&q| Qubit(q)).collect(),
            cbit: None,
        })
    }

    pub fn measure(&mut self, qubit: usize, cbit: usize) -> Result<(), CircuitError> {
        self.push(Instruction {
            kind: OpKind::Measure,
            qubits: vec![Qubit(qubit)],
            cbit: Some(Cbit(cbit)),
        })
    }

    pub fn reset(&mut self, qubit: usize) -> Result<(), CircuitError> {
        self.push(Instruction {
            kind: OpKind::Reset,
            qubits: vec![Qubit(qubit)],
            cbit: None,
        })
    }

    pub fn barrier(&mut self, qubits: &[usize]) -> Result<(), CircuitError> {
        self.push(Instruction {
            kind: OpKind::Barrier,
            qubits: qubits.iter().map(|&q| Qubit(q)).collect(),
            cbit: None,
        })
    }

    /// Barrier across every declared qubit. No-op on a zero-qubit circuit.
    pub fn barrier_all(&mut self) -> Result<(), CircuitError> {
        let n = self.qubit_count();
        if n == 0 {
            return Ok(());
        }
        self.barrier(&(0..n).collect::<Vec<_>>())
    }

    /// Appends the instructions of a purely unitary circuit, matching qubits
    /// by flat index. Used to splice basis-change circuits onto preparations.
    pub fn append_unitary(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.qubit_count() > self.qubit_count() {
            return Err(CircuitError::AppendTooWide(
                other.qubit_count(),
                self.qubit_count(),
            ));
        }
        if other
            .instructions
            .iter()
            .any(|i| i.is_measure() || i.is_reset())
        {
            return Err(CircuitError::AppendNotUnitary);
        }
        for ins in &other.instructions {
            self.push(ins.clone())?;
        }
        Ok(())
    }

    /// Structural equality with a tolerance on gate angles. Register layout
    /// and instruction sequence must match exactly.
    pub fn approx_eq(&self, other: &Circuit, angle_tol: f64) -> bool {
        if self.qregs != other.qregs || self.cregs != other.cregs {
            return false;
        }
        if self.instructions.len() != other.instructions.len() {
            return false;
        }
        self.instructions
            .iter()
            .zip(&other.instructions)
            .all(|(a, b)| {
                if a.qubits != b.qubits || a.cbit != b.cbit {
                    return false;
                }
                match (&a.kind, &b.kind) {
                    (OpKind::Gate(x), OpKind::Gate(y)) => {
                        std::mem::discriminant(x) == std::mem::discriminant(y)
                            && match (x.param(), y.param()) {
                                (Some(p), Some(q)) => (p - q).abs() <= angle_tol,
                                (None, None) => true,
                                _ => false,
                            }
                    }
                    (x, y) => x == y,
                }
            })
    }

    /// Removes terminal readout: repeatedly drops every measurement that is
    /// the last instruction on its qubit. Mid-circuit measurements (followed
    /// by anything on the same qubit) and resets are always preserved. The
    /// input is unchanged; registers carry over.
    pub fn strip_terminal_measurements(&self) -> Circuit {
        let nq = self.qubit_count();
        let mut keep = vec![true; self.instructions.len()];
        loop {
            let mut last_user: Vec<Option<usize>> = vec![None; nq];
            for (i, ins) in self.instructions.iter().enumerate() {
                if keep[i] {
                    for q in &ins.qubits {
                        last_user[q.0] = Some(i);
                    }
                }
            }
            let mut removed = false;
            for (i, ins) in self.instructions.iter().enumerate() {
                if keep[i]
                    && ins.is_measure()
                    && ins.qubits.iter().all(|q| last_user[q.0] == Some(i))
                {
                    keep[i] = false;
                    removed = true;
                }
            }
            if !removed {
                break;
            }
        }
        Circuit {
            qregs: self.qregs.clone(),
            cregs: self.cregs.clone(),
            instructions: self
                .instructions
                .iter()
                .zip(&keep)
                .filter(|(_, k)| **k)
                .map(|(i, _)| i.clone())
                .collect(),
        }
    }
}

/// ASAP layering of a circuit. Depth is the number of moments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSchedule {
    moments: Vec<Vec<usize>>,
}

impl MomentSchedule {
    pub fn depth(&self) -> usize {
        self.moments.len()
    }

    /// Instruction indices per moment, in placement order.
    pub fn moments(&self) -> &[Vec<usize>] {
        &self.moments
    }

    /// Moment index of each instruction.
    pub fn moment_of(&self) -> Vec<usize> {
        let n: usize = self.moments.iter().map(|m| m.len()).sum();
        let mut out = vec![0; n];
        for (m, ids) in self.moments.iter().enumerate() {
            for &i in ids {
                out[i] = m;
            }
        }
        out
    }
}

/// Greedy ASAP schedule: each instruction lands in the earliest moment where
/// all of its qubits are free. Barriers occupy their qubits for one moment.
pub fn schedule_moments(circuit: &Circuit) -> MomentSchedule {
    let mut free = vec![0usize; circuit.qubit_count()];
    let mut moments: Vec<Vec<usize>> = Vec::new();
    for (i, ins) in circuit.instructions().iter().enumerate() {
        let m = ins.qubits.iter().map(|q| free[q.0]).max().unwrap_or(0);
        if m >= moments.len() {
            moments.resize_with(m + 1, Vec::new);
        }
        moments[m].push(i);
        for q in &ins.qubits {
            free[q.0] = m + 1;
        }
    }
    MomentSchedule { moments }
}

/// Qubit interaction graph: vertices are qubits touched by at least one
/// non-barrier instruction, edges join qubits sharing a two-qubit gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    vertices: BTreeSet<Qubit>,
    edges: BTreeSet<(Qubit, Qubit)>,
}

impl InteractionGraph {
    pub fn vertices(&self) -> &BTreeSet<Qubit> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(Qubit, Qubit)> {
        &self.edges
    }

    pub fn degree(&self, q: Qubit) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| *a == q || *b == q)
            .count()
    }

    pub fn degree_sum(&self) -> usize {
        2 * self.edges.len()
    }
}

pub fn interaction_graph(circuit: &Circuit) -> InteractionGraph {
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for ins in circuit.instructions() {
        if ins.is_barrier() {
            continue;
        }
        for q in &ins.qubits {
            vertices.insert(*q);
        }
        if ins.qubits.len() == 2 {
            let (a, b) = (ins.qubits[0], ins.qubits[1]);
            let e = if a < b { (a, b) } else { (b, a) };
            edges.insert(e);
        }
    }
    InteractionGraph { vertices, edges }
}

/// Dependency DAG: an edge u -> v whenever v is the next instruction after u
/// on some shared qubit. Node ids are instruction indices, so instruction
/// order is a topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyDag {
    node_count: usize,
    preds: Vec<Vec<usize>>,
}

impl DependencyDag {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn predecessors(&self, node: usize) -> &[usize] {
        &self.preds[node]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (v, ps) in self.preds.iter().enumerate() {
            for &u in ps {
                out.push((u, v));
            }
        }
        out
    }

    /// Length (node count) of the longest path. Zero for an empty DAG.
    pub fn longest_path_len(&self) -> usize {
        let mut best = vec![0usize; self.node_count];
        let mut max = 0;
        for v in 0..self.node_count {
            let len = 1 + self.preds[v].iter().map(|&u| best[u]).max().unwrap_or(0);
            best[v] = len;
            max = max.max(len);
        }
        max
    }
}

pub fn dependency_dag(circuit: &Circuit) -> DependencyDag {
    let nq = circuit.qubit_count();
    let mut last: Vec<Option<usize>> = vec![None; nq];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); circuit.instructions().len()];
    for (i, ins) in circuit.instructions().iter().enumerate() {
        for q in &ins.qubits {
            if let Some(u) = last[q.0] {
                if !preds[i].contains(&u) {
                    preds[i].push(u);
                }
            }
            last[q.0] = Some(i);
        }
    }
    DependencyDag {
        node_count: circuit.instructions().len(),
        preds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ghz3_with_measures() -> Circuit {
        let mut c = Circuit::new();
        c.add_qreg("q", 3).unwrap();
        c.add_creg("c", 3).unwrap();
        c.push_gate(Gate::H, &[0]).unwrap();
        c.push_gate(Gate::Cx, &[0, 1]).unwrap();
        c.push_gate(Gate::Cx, &[1, 2]).unwrap();
        c.measure(0, 0).unwrap();
        c.measure(1, 1).unwrap();
        c.measure(2, 2).unwrap();
        c
    }

    #[test]
    fn strip_removes_terminal_measures_only() {
        let c = ghz3_with_measures();
        let s = c.strip_terminal_measurements();
        assert_eq!(s.instructions().len(), 3);
        assert!(s.instructions().iter().all(|i| !i.is_measure()));
        // idempotent
        assert_eq!(s.strip_terminal_measurements(), s);
        // input untouched
        assert_eq!(c.instructions().len(), 6);
    }

    #[test]
    fn strip_keeps_trailing_reset() {
        let mut c = Circuit::new();
        c.add_qreg("q", 1).unwrap();
        c.add_creg("c", 1).unwrap();
        c.push_gate(Gate::H, &[0]).unwrap();
        c.reset(0).unwrap();
        let s = c.strip_terminal_measurements();
        assert_eq!(s, c);
    }

    #[test]
    fn strip_keeps_mid_circuit_measure() {
        let mut c = Circuit::new();
        c.add_qreg("q", 1).unwrap();
        c.add_creg("c", 1).unwrap();
        c.push_gate(Gate::H, &[0]).unwrap();
        c.measure(0, 0).unwrap();
        c.reset(0).unwrap();
        c.push_gate(Gate::H, &[0]).unwrap();
        c.measure(0, 0).unwrap();
        let s = c.strip_terminal_measurements();
        assert_eq!(s.instructions().len(), 4);
        assert!(s.instructions()[1].is_measure());
    }

    #[test]
    fn strip_of_empty_circuit_is_empty() {
        let c = Circuit::new();
        assert_eq!(c.strip_terminal_measurements(), c);
    }

    #[test]
    fn ghz_schedule_after_strip_has_three_moments() {
        let s = ghz3_with_measures().strip_terminal_measurements();
        let sched = schedule_moments(&s);
        assert_eq!(sched.depth(), 3);
        assert_eq!(sched.moments(), &[vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn parallel_single_qubit_gates_share_one_moment() {
        let mut c = Circuit::new();
        c.add_qreg("q", 5).unwrap();
        for q in 0..5 {
            c.push_gate(Gate::X, &[q]).unwrap();
        }
        assert_eq!(schedule_moments(&c).depth(), 1);
    }

    #[test]
    fn empty_circuit_has_depth_zero() {
        assert_eq!(schedule_moments(&Circuit::new()).depth(), 0);
    }

    #[test]
    fn barrier_occupies_a_moment() {
        let mut c = Circuit::new();
        c.add_qreg("q", 2).unwrap();
        c.push_gate(Gate::X, &[0]).unwrap();
        c.barrier_all().unwrap();
        c.push_gate(Gate::X, &[0]).unwrap();
        c.push_gate(Gate::X, &[1]).unwrap();
        let sched = schedule_moments(&c);
        assert_eq!(sched.depth(), 3);
        assert_eq!(sched.moments()[2], vec![2, 3]);
    }

    #[test]
    fn ladder_interaction_graph_is_a_path() {
        let mut c = Circuit::new();
        c.add_qreg("q", 4).unwrap();
        c.push_gate(Gate::H, &[0]).unwrap();
        for i in 0..3 {
            c.push_gate(Gate::Cx, &[i, i + 1]).unwrap();
        }
        let g = interaction_graph(&c);
        assert_eq!(g.vertices().len(), 4);
        assert_eq!(g.edges().len(), 3);
        assert_eq!(g.degree(Qubit(0)), 1);
        assert_eq!(g.degree(Qubit(1)), 2);
        assert_eq!(g.degree_sum(), 2 * g.edges().len());
    }

    #[test]
    fn all_pairs_interaction_graph_is_complete() {
        let mut c = Circuit::new();
        c.add_qreg("q", 4).unwrap();
        for i in 0..4 {
            for j in (i + 1)..4 {
                c.push_gate(Gate::Rzz(0.3), &[i, j]).unwrap();
            }
        }
        assert_eq!(interaction_graph(&c).edges().len(), 6);
    }

    #[test]
    fn single_qubit_circuit_has_edgeless_graph() {
        let mut c = Circuit::new();
        c.add_qreg("q", 3).unwrap();
        c.push_gate(Gate::H, &[0]).unwrap();
        c.push_gate(Gate::H, &[1]).unwrap();
        assert!(interaction_graph(&c).edges().is_empty());
    }

    #[test]
    fn ghz_dag_is_a_chain() {
        let s = ghz3_with_measures().strip_terminal_measurements();
        let dag = dependency_dag(&s);
        assert_eq!(dag.longest_path_len(), 3);
        assert_eq!(dag.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn disjoint_gates_are_isolated_nodes() {
        let mut c = Circuit::new();
        c.add_qreg("q", 4).unwrap();
        c.push_gate(Gate::Cx, &[0, 1]).unwrap();
        c.push_gate(Gate::Cx, &[2, 3]).unwrap();
        let dag = dependency_dag(&c);
        assert_eq!(dag.longest_path_len(), 1);
        assert!(dag.edges().is_empty());
    }

    #[test]
    fn empty_dag() {
        let dag = dependency_dag(&Circuit::new());
        assert_eq!(dag.node_count(), 0);
        assert_eq!(dag.longest_path_len(), 0);
    }

    #[test]
    fn longest_path_matches_schedule_depth() {
        let c = ghz3_with_measures();
        assert_eq!(
            dependency_dag(&c).longest_path_len(),
            schedule_moments(&c).depth()
        );
    }

    #[test]
    fn push_rejects_bad_instructions() {
        let mut c = Circuit::new();
        c.add_qreg("q", 2).unwrap();
        assert_eq!(
            c.push_gate(Gate::H, &[5]).unwrap_err(),
            CircuitError::QubitOutOfRange(5, 2)
        );
        assert_eq!(
            c.push_gate(Gate::Cx, &[0, 0]).unwrap_err(),
            CircuitError::DuplicateQubit(0)
        );
        assert!(matches!(
            c.push_gate(Gate::Cx, &[0]).unwrap_err(),
            CircuitError::BadArity { .. }
        ));
        assert_eq!(
            c.measure(0, 0).unwrap_err(),
            CircuitError::CbitOutOfRange(0, 0)
        );
        assert_eq!(
            c.push_gate(Gate::Rx(f64::NAN), &[0]).unwrap_err(),
            CircuitError::NonFiniteParam
        );
    }

    #[test]
    fn qubit_id_round_trips_register_layout() {
        let mut c = Circuit::new();
        c.add_qreg("a", 2).unwrap();
        c.add_qreg("b", 3).unwrap();
        let id = c.qubit_id(Qubit(3)).unwrap();
        assert_eq!(id.register, "b");
        assert_eq!(id.index, 1);
        assert_eq!(c.find_qubit("b", 1), Some(Qubit(3)));
        assert_eq!(c.find_qubit("b", 3), None);
        assert_eq!(c.find_qubit("z", 0), None);
    }
}
