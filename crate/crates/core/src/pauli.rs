//! Pauli-string algebra, the Mermin operator expansion, simultaneous
//! diagonalization of commuting observables, and expectation estimation from
//! measured histograms.
//!
//! Diagonalization works on the symplectic `(x|z)` representation: Gaussian
//! elimination with H, S, and CX conjugations clears every X component while
//! tracking signs exactly, so the diagonal observable's coefficients are
//! `±1` multiples of the originals.

use crate::circuit::{Circuit, Gate};
use crate::sim::ShotHistogram;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PauliError {
    #[error("pauli strings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("mermin operator requires n >= 2, got {0}")]
    TooFewQubits(usize),
    #[error("invalid pauli letter '{0}'")]
    InvalidLetter(char),
    #[error("observable terms must all act on {expected} qubits, found {found}")]
    MixedWidths { expected: usize, found: usize },
    #[error("duplicate pauli string '{0}' in observable")]
    DuplicateTerm(String),
    #[error("coefficients must be finite")]
    NonFiniteCoefficient,
    #[error("observable is empty")]
    EmptyObservable,
    #[error("observable terms do not pairwise commute")]
    NonCommuting,
    #[error("observable is not diagonal (contains X or Y letters)")]
    NotDiagonal,
    #[error("histogram width {hist} does not match observable width {obs}")]
    WidthMismatch { hist: usize, obs: usize },
    #[error("histogram is empty")]
    EmptyHistogram,
    #[error("per-term fallback is limited to {limit} qubits, got {got}")]
    FallbackTooWide { limit: usize, got: usize },
}

/// One Pauli letter per qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    fn letter(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }
}

/// A fixed-length word over `{I, X, Y, Z}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliString(Vec<PauliOp>);

impl PauliString {
    pub fn new(ops: Vec<PauliOp>) -> Self {
        PauliString(ops)
    }

    pub fn identity(n: usize) -> Self {
        PauliString(vec![PauliOp::I; n])
    }

    pub fn parse(s: &str) -> Result<Self, PauliError> {
        s.chars()
            .map(|c| match c {
                'I' => Ok(PauliOp::I),
                'X' => Ok(PauliOp::X),
                'Y' => Ok(PauliOp::Y),
                'Z' => Ok(PauliOp::Z),
                other => Err(PauliError::InvalidLetter(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(PauliString)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn op(&self, qubit: usize) -> PauliOp {
        self.0[qubit]
    }

    pub fn ops(&self) -> &[PauliOp] {
        &self.0
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|o| **o != PauliOp::I).count()
    }

    pub fn is_diagonal(&self) -> bool {
        self.0
            .iter()
            .all(|o| matches!(o, PauliOp::I | PauliOp::Z))
    }

    /// Bit mask of Z-support positions; meaningful for diagonal strings.
    pub fn z_mask(&self) -> u64 {
        let mut m = 0u64;
        for (i, o) in self.0.iter().enumerate() {
            if matches!(o, PauliOp::Z | PauliOp::Y) {
                m |= 1 << i;
            }
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.0 {
            write!(f, "{}", o.letter())?;
        }
        Ok(())
    }
}

/// True when the strings commute: an even number of positions where both are
/// non-identity and different.
pub fn pauli_commutes(a: &PauliString, b: &PauliString) -> Result<bool, PauliError> {
    if a.len() != b.len() {
        return Err(PauliError::LengthMismatch(a.len(), b.len()));
    }
    let anti = a
        .ops()
        .iter()
        .zip(b.ops())
        .filter(|(x, y)| **x != PauliOp::I && **y != PauliOp::I && x != y)
        .count();
    Ok(anti % 2 == 0)
}

/// A real linear combination of Pauli strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    terms: Vec<(f64, PauliString)>,
}

impl Observable {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self, PauliError> {
        if terms.is_empty() {
            return Err(PauliError::EmptyObservable);
        }
        let n = terms[0].1.len();
        let mut seen = BTreeSet::new();
        for (c, p) in &terms {
            if p.len() != n {
                return Err(PauliError::MixedWidths {
                    expected: n,
                    found: p.len(),
                });
            }
            if !c.is_finite() {
                return Err(PauliError::NonFiniteCoefficient);
            }
            if !seen.insert(p.clone()) {
                return Err(PauliError::DuplicateTerm(p.to_string()));
            }
        }
        Ok(Observable { terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.terms[0].1.len()
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.is_diagonal())
    }

    pub fn sum_abs_coefficients(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    pub fn pairwise_commuting(&self) -> bool {
        for i in 0..self.terms.len() {
            for j in (i + 1)..self.terms.len() {
                if !pauli_commutes(&self.terms[i].1, &self.terms[j].1).unwrap_or(false) {
                    return false;
                }
            }
        }
        true
    }
}

/// Expands the n-qubit Mermin operator into its `2^(n-1)` Pauli terms: every
/// full-weight X/Y word with an odd number of Y letters, signed `+1` when
/// `#Y mod 4 == 1` and `-1` when `#Y mod 4 == 3`.
pub fn mermin_operator(n: usize) -> Result<Observable, PauliError> {
    if n < 2 {
        return Err(PauliError::TooFewQubits(n));
    }
    let mut terms = Vec::with_capacity(1 << (n - 1));
    for mask in 0u64..(1 << n) {
        let y_count = mask.count_ones();
        if y_count % 2 == 0 {
            continue;
        }
        let coeff = if y_count % 4 == 1 { 1.0 } else { -1.0 };
        let ops = (0..n)
            .map(|q| {
                if mask >> q & 1 == 1 {
                    PauliOp::Y
                } else {
                    PauliOp::X
                }
            })
            .collect();
        terms.push((coeff, PauliString::new(ops)));
    }
    Observable::new(terms)
}

/// Symplectic representation of a signed Pauli word.
#[derive(Debug, Clone)]
struct SymplecticTerm {
    x: Vec<bool>,
    z: Vec<bool>,
    sign: f64,
}

impl SymplecticTerm {
    fn from_string(p: &PauliString) -> Self {
        let n = p.len();
        let mut x = vec![false; n];
        let mut z = vec![false; n];
        for (q, o) in p.ops().iter().enumerate() {
            match o {
                PauliOp::I => {}
                PauliOp::X => x[q] = true,
                PauliOp::Y => {
                    x[q] = true;
                    z[q] = true;
                }
                PauliOp::Z => z[q] = true,
            }
        }
        SymplecticTerm { x, z, sign: 1.0 }
    }

    fn to_string_rep(&self) -> PauliString {
        PauliString::new(
            self.x
                .iter()
                .zip(&self.z)
                .map(|(&x, &z)| match (x, z) {
                    (false, false) => PauliOp::I,
                    (true, false) => PauliOp::X,
                    (true, true) => PauliOp::Y,
                    (false, true) => PauliOp::Z,
                })
                .collect(),
        )
    }

    // Conjugation rules: the term becomes g P g^dagger.
    fn conj_h(&mut self, q: usize) {
        if self.x[q] && self.z[q] {
            self.sign = -self.sign;
        }
        let (xq, zq) = (self.x[q], self.z[q]);
        self.x[q] = zq;
        self.z[q] = xq;
    }

    fn conj_s(&mut self, q: usize) {
        if self.x[q] && self.z[q] {
            self.sign = -self.sign;
        }
        self.z[q] ^= self.x[q];
    }

    fn conj_cx(&mut self, c: usize, t: usize) {
        if self.x[c] && self.z[t] && (self.x[t] == self.z[c]) {
            self.sign = -self.sign;
        }
        self.x[t] ^= self.x[c];
        self.z[c] ^= self.z[t];
    }

    fn apply(&mut self, gate: &Gate, qubits: &[usize]) {
        match gate {
            Gate::H => self.conj_h(qubits[0]),
            Gate::S => self.conj_s(qubits[0]),
            Gate::Cx => self.conj_cx(qubits[0], qubits[1]),
            other => unreachable!("diagonalizer only emits H/S/CX, got {other:?}"),
        }
    }
}

/// Builds a Clifford circuit that rotates every term of a pairwise-commuting
/// observable into the computational basis, returning the circuit and the
/// diagonal observable it produces. Conjugating term `i` of the input by the
/// returned circuit yields term `i` of the output with the sign folded into
/// the coefficient, so `<obs>` on a state equals the diagonal expectation on
/// the rotated state's measurement histogram.
pub fn shared_basis_circuit(obs: &Observable) -> Result<(Circuit, Observable), PauliError> {
    if !obs.pairwise_commuting() {
        return Err(PauliError::NonCommuting);
    }
    let n = obs.n_qubits();
    let mut terms: Vec<SymplecticTerm> = obs
        .terms()
        .iter()
        .map(|(_, p)| SymplecticTerm::from_string(p))
        .collect();
    let mut circuit = Circuit::new();
    circuit
        .add_qreg("q", n)
        .expect("fresh circuit accepts a register");

    let apply_all = |terms: &mut Vec<SymplecticTerm>, circuit: &mut Circuit, gate: Gate, qs: &[usize]| {
        for t in terms.iter_mut() {
            t.apply(&gate, qs);
        }
        circuit.push_gate(gate, qs).expect("generated gate is valid");
    };

    loop {
        let Some(k) = terms.iter().position(|t| t.x.iter().any(|&b| b)) else {
            break;
        };
        // Turn Y letters of the pivot term into X.
        let y_positions: Vec<usize> = (0..n).filter(|&q| terms[k].x[q] && terms[k].z[q]).collect();
        for q in y_positions {
            apply_all(&mut terms, &mut circuit, Gate::S, &[q]);
        }
        // Fold the X support onto a single pivot qubit.
        let support: Vec<usize> = (0..n).filter(|&q| terms[k].x[q]).collect();
        let pivot = support[0];
        for &q in &support[1..] {
            apply_all(&mut terms, &mut circuit, Gate::Cx, &[pivot, q]);
        }
        // Pairwise commutation guarantees every other term has even overlap
        // with the support, so its z[pivot] is clear after the cascade and H
        // cannot reintroduce an X there.
        apply_all(&mut terms, &mut circuit, Gate::H, &[pivot]);
        debug_assert!(terms[k].x.iter().all(|&b| !b));
    }

    let diag_terms: Vec<(f64, PauliString)> = obs
        .terms()
        .iter()
        .zip(&terms)
        .map(|((c, _), t)| (c * t.sign, t.to_string_rep()))
        .collect();
    let diag = Observable::new(diag_terms)?;
    debug_assert!(diag.is_diagonal());
    Ok((circuit, diag))
}

/// One measurement circuit per term: each single Pauli word is rotated into
/// the Z basis qubit-by-qubit (X via H, Y via S-dagger then H). Intended as a
/// cross-validation mode for small observables.
pub fn per_term_basis_circuits(
    obs: &Observable,
) -> Result<Vec<(Circuit, Observable)>, PauliError> {
    const LIMIT: usize = 4;
    let n = obs.n_qubits();
    if n > LIMIT {
        return Err(PauliError::FallbackTooWide { limit: LIMIT, got: n });
    }
    let mut out = Vec::with_capacity(obs.terms().len());
    for (c, p) in obs.terms() {
        let mut circuit = Circuit::new();
        circuit.add_qreg("q", n).expect("fresh circuit");
        let mut diag_ops = vec![PauliOp::I; n];
        for (q, o) in p.ops().iter().enumerate() {
            match o {
                PauliOp::I => {}
                PauliOp::X => {
                    circuit.push_gate(Gate::H, &[q]).unwrap();
                    diag_ops[q] = PauliOp::Z;
                }
                PauliOp::Y => {
                    circuit.push_gate(Gate::Sdg, &[q]).unwrap();
                    circuit.push_gate(Gate::H, &[q]).unwrap();
                    diag_ops[q] = PauliOp::Z;
                }
                PauliOp::Z => diag_ops[q] = PauliOp::Z,
            }
        }
        let diag = Observable::new(vec![(*c, PauliString::new(diag_ops))])?;
        out.push((circuit, diag));
    }
    Ok(out)
}

/// Expectation of a diagonal observable against a shot histogram:
/// `sum_terms c * sum_bits (count/shots) * (-1)^(parity of bits on the Z support)`.
pub fn expectation_from_histogram(
    obs: &Observable,
    hist: &ShotHistogram,
) -> Result<f64, PauliError> {
    if !obs.is_diagonal() {
        return Err(PauliError::NotDiagonal);
    }
    if hist.shots() == 0 {
        return Err(PauliError::EmptyHistogram);
    }
    if hist.width() != obs.n_qubits() {
        return Err(PauliError::WidthMismatch {
            hist: hist.width(),
            obs: obs.n_qubits(),
        });
    }
    let shots = hist.shots() as f64;
    let masks: Vec<(f64, u64)> = obs.terms().iter().map(|(c, p)| (*c, p.z_mask())).collect();
    let mut total = 0.0;
    for (&bits, &count) in hist.counts() {
        let w = count as f64 / shots;
        for &(c, mask) in &masks {
            let parity = (bits & mask).count_ones() % 2;
            total += c * w * if parity == 0 { 1.0 } else { -1.0 };
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::ShotHistogram;

    fn ps(s: &str) -> PauliString {
        PauliString::parse(s).unwrap()
    }

    #[test]
    fn mermin_two_qubits() {
        let m = mermin_operator(2).unwrap();
        let mut terms: Vec<(String, f64)> = m
            .terms()
            .iter()
            .map(|(c, p)| (p.to_string(), *c))
            .collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(
            terms,
            vec![("XY".to_string(), 1.0), ("YX".to_string(), 1.0)]
        );
    }

    #[test]
    fn mermin_three_qubits() {
        let m = mermin_operator(3).unwrap();
        let mut terms: Vec<(String, f64)> = m
            .terms()
            .iter()
            .map(|(c, p)| (p.to_string(), *c))
            .collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(
            terms,
            vec![
                ("XXY".to_string(), 1.0),
                ("XYX".to_string(), 1.0),
                ("YXX".to_string(), 1.0),
                ("YYY".to_string(), -1.0),
            ]
        );
    }

    #[test]
    fn mermin_term_count_and_commutation() {
        for n in 2..=10 {
            let m = mermin_operator(n).unwrap();
            assert_eq!(m.terms().len(), 1 << (n - 1), "term count at n={n}");
            assert!(m.pairwise_commuting(), "commutation at n={n}");
        }
        assert!(matches!(
            mermin_operator(1),
            Err(PauliError::TooFewQubits(1))
        ));
    }

    #[test]
    fn commutation_examples() {
        assert!(pauli_commutes(&ps("XX"), &ps("YY")).unwrap());
        assert!(!pauli_commutes(&ps("XI"), &ps("ZI")).unwrap());
        let a = ps("XYZI");
        assert!(pauli_commutes(&a, &a).unwrap());
        assert!(matches!(
            pauli_commutes(&ps("X"), &ps("XX")),
            Err(PauliError::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn diagonal_observable_passes_through() {
        let obs = Observable::new(vec![(1.0, ps("ZZ"))]).unwrap();
        let (circuit, diag) = shared_basis_circuit(&obs).unwrap();
        assert!(circuit.is_empty());
        assert_eq!(diag, obs);
    }

    #[test]
    fn non_commuting_observable_is_rejected() {
        let obs = Observable::new(vec![(1.0, ps("XI")), (1.0, ps("ZI"))]).unwrap();
        assert!(matches!(
            shared_basis_circuit(&obs),
            Err(PauliError::NonCommuting)
        ));
    }

    #[test]
    fn diagonalizer_output_is_diagonal_for_mermin() {
        for n in 2..=6 {
            let m = mermin_operator(n).unwrap();
            let (circuit, diag) = shared_basis_circuit(&m).unwrap();
            assert!(diag.is_diagonal());
            assert_eq!(diag.terms().len(), m.terms().len());
            assert!(!circuit.is_empty());
            for (c, _) in diag.terms() {
                assert!((c.abs() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn expectation_examples() {
        let z = Observable::new(vec![(1.0, ps("Z"))]).unwrap();
        let h = ShotHistogram::from_counts(1, [(0b0, 100)]).unwrap();
        assert_eq!(expectation_from_histogram(&z, &h).unwrap(), 1.0);

        let zz = Observable::new(vec![(1.0, ps("ZZ"))]).unwrap();
        let h = ShotHistogram::from_counts(2, [(0b00, 50), (0b11, 50)]).unwrap();
        assert_eq!(expectation_from_histogram(&zz, &h).unwrap(), 1.0);

        let zi_iz = Observable::new(vec![(1.0, ps("ZI")), (1.0, ps("IZ"))]).unwrap();
        // bit 0 set means qubit 0 measured one
        let h = ShotHistogram::from_counts(2, [(0b01, 100)]).unwrap();
        assert_eq!(expectation_from_histogram(&zi_iz, &h).unwrap(), 0.0);
    }

    #[test]
    fn expectation_rejects_bad_inputs() {
        let x = Observable::new(vec![(1.0, ps("X"))]).unwrap();
        let h = ShotHistogram::from_counts(1, [(0, 1)]).unwrap();
        assert!(matches!(
            expectation_from_histogram(&x, &h),
            Err(PauliError::NotDiagonal)
        ));
        let z = Observable::new(vec![(1.0, ps("ZZ"))]).unwrap();
        assert!(matches!(
            expectation_from_histogram(&z, &h),
            Err(PauliError::WidthMismatch { .. })
        ));
    }

    #[test]
    fn expectation_is_linear_and_bounded() {
        let obs = Observable::new(vec![(0.75, ps("ZI")), (-2.0, ps("ZZ"))]).unwrap();
        let h = ShotHistogram::from_counts(2, [(0b00, 10), (0b01, 20), (0b10, 5)]).unwrap();
        let e = expectation_from_histogram(&obs, &h).unwrap();
        assert!(e.abs() <= obs.sum_abs_coefficients() + 1e-12);
        let scaled = Observable::new(vec![(1.5, ps("ZI")), (-4.0, ps("ZZ"))]).unwrap();
        let e2 = expectation_from_histogram(&scaled, &h).unwrap();
        assert!((e2 - 2.0 * e).abs() < 1e-12);
    }

    #[test]
    fn observable_validation() {
        assert!(matches!(
            Observable::new(vec![]),
            Err(PauliError::EmptyObservable)
        ));
        assert!(matches!(
            Observable::new(vec![(1.0, ps("Z")), (2.0, ps("Z"))]),
            Err(PauliError::DuplicateTerm(_))
        ));
        assert!(matches!(
            Observable::new(vec![(1.0, ps("Z")), (2.0, ps("ZZ"))]),
            Err(PauliError::MixedWidths { .. })
        ));
        assert!(matches!(
            Observable::new(vec![(f64::NAN, ps("Z"))]),
            Err(PauliError::NonFiniteCoefficient)
        ));
    }

    #[test]
    fn per_term_fallback_produces_single_term_diagonals() {
        let obs = Observable::new(vec![(1.0, ps("XY")), (-0.5, ps("ZI"))]).unwrap();
        let circuits = per_term_basis_circuits(&obs).unwrap();
        assert_eq!(circuits.len(), 2);
        for (_, diag) in &circuits {
            assert!(diag.is_diagonal());
            assert_eq!(diag.terms().len(), 1);
        }
        let wide = Observable::new(vec![(1.0, ps("XXXXX"))]).unwrap();
        assert!(matches!(
            per_term_basis_circuits(&wide),
            Err(PauliError::FallbackTooWide { .. })
        ));
    }
}
