//! Single-iteration VQE proxy on the 1D transverse-field Ising chain:
//! a hardware-efficient RY/CX/RY ansatz whose parameters are pre-optimized
//! on the noiseless simulator, measured in two orthogonal bases.

use super::{qaoa_score, BenchError, BenchmarkInstance, Family, FamilyParams, IdealPayload};
use crate::circuit::{Circuit, Gate};
use crate::pauli::{Observable, PauliOp, PauliString};
use crate::sim::simulate_state;
use nalgebra::DMatrix;

/// Guard for the ansatz optimization.
pub const VQE_MAX_QUBITS: usize = 16;
/// Guard for dense exact diagonalization.
pub const DIAG_MAX_QUBITS: usize = 14;

/// The open-chain TFIM Hamiltonian `-J sum Z_i Z_{i+1} - h sum X_i`.
pub fn tfim_hamiltonian(n: usize, j: f64, h: f64) -> Result<Observable, BenchError> {
    let mut terms = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut ops = vec![PauliOp::I; n];
        ops[i] = PauliOp::Z;
        ops[i + 1] = PauliOp::Z;
        terms.push((-j, PauliString::new(ops)));
    }
    for i in 0..n {
        let mut ops = vec![PauliOp::I; n];
        ops[i] = PauliOp::X;
        terms.push((-h, PauliString::new(ops)));
    }
    Ok(Observable::new(terms)?)
}

/// Ground energy of the open-chain TFIM by dense exact diagonalization.
pub fn tfim_exact_ground_energy(n: usize, j: f64, h: f64) -> Result<f64, BenchError> {
    if n == 0 || n > DIAG_MAX_QUBITS {
        return Err(BenchError::SizeGuard {
            limit: DIAG_MAX_QUBITS,
            got: n,
        });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for row in 0..dim {
        let mut diag = 0.0;
        for i in 0..n.saturating_sub(1) {
            let zi = if row >> i & 1 == 0 { 1.0 } else { -1.0 };
            let zj = if row >> (i + 1) & 1 == 0 { 1.0 } else { -1.0 };
            diag += -j * zi * zj;
        }
        m[(row, row)] = diag;
        for i in 0..n {
            m[(row, row ^ (1 << i))] += -h;
        }
    }
    let eig = m.symmetric_eigenvalues();
    Ok(eig.iter().copied().fold(f64::INFINITY, f64::min))
}

/// RY layer, CX chain, RY layer; `2n` parameters.
fn ansatz(n: usize, thetas: &[f64], basis_x: bool, measure: bool) -> Result<Circuit, BenchError> {
    debug_assert_eq!(thetas.len(), 2 * n);
    let mut c = Circuit::new();
    c.add_qreg("q", n)?;
    if measure {
        c.add_creg("c", n)?;
    }
    for q in 0..n {
        c.push_gate(Gate::Ry(thetas[q]), &[q])?;
    }
    for q in 0..n - 1 {
        c.push_gate(Gate::Cx, &[q, q + 1])?;
    }
    for q in 0..n {
        c.push_gate(Gate::Ry(thetas[n + q]), &[q])?;
    }
    if basis_x {
        for q in 0..n {
            c.push_gate(Gate::H, &[q])?;
        }
    }
    if measure {
        for q in 0..n {
            c.measure(q, q)?;
        }
    }
    Ok(c)
}

fn energy(n: usize, thetas: &[f64], ham: &Observable) -> Result<f64, BenchError> {
    let state = simulate_state(&ansatz(n, thetas, false, false)?)?;
    Ok(state.observable_expectation(ham))
}

/// Deterministic coordinate descent. The energy is sinusoidal in each RY
/// angle, so each line search solves `a + b cos t + c sin t` exactly from
/// three evaluations and jumps to the coordinate minimum.
fn optimize_ansatz(n: usize, ham: &Observable) -> Result<(Vec<f64>, f64), BenchError> {
    let mut thetas = vec![0.1; 2 * n];
    let mut e_prev = energy(n, &thetas, ham)?;
    const MAX_SWEEPS: usize = 500;
    for _ in 0..MAX_SWEEPS {
        for k in 0..thetas.len() {
            let t0 = thetas[k];
            let e0 = energy(n, &thetas, ham)?;
            thetas[k] = t0 + std::f64::consts::FRAC_PI_2;
            let ep = energy(n, &thetas, ham)?;
            thetas[k] = t0 - std::f64::consts::FRAC_PI_2;
            let em = energy(n, &thetas, ham)?;
            let a = (ep + em) / 2.0;
            let u = e0 - a;
            let v = (ep - em) / 2.0;
            let b = u * t0.cos() - v * t0.sin();
            let c = u * t0.sin() + v * t0.cos();
            thetas[k] = if b == 0.0 && c == 0.0 {
                t0
            } else {
                (-c).atan2(-b)
            };
        }
        let e_now = energy(n, &thetas, ham)?;
        if e_prev - e_now < 1e-7 {
            return Ok((thetas, e_now));
        }
        e_prev = e_now;
    }
    Ok((thetas, e_prev))
}

/// Diagonal observable for the ZZ terms as read from the Z-basis histogram.
fn zz_observable(n: usize) -> Result<Observable, BenchError> {
    let terms = (0..n - 1)
        .map(|i| {
            let mut ops = vec![PauliOp::I; n];
            ops[i] = PauliOp::Z;
            ops[i + 1] = PauliOp::Z;
            (-1.0, PauliString::new(ops))
        })
        .collect();
    Ok(Observable::new(terms)?)
}

/// Diagonal observable for the X terms as read from the H-rotated histogram.
fn x_observable(n: usize) -> Result<Observable, BenchError> {
    let terms = (0..n)
        .map(|i| {
            let mut ops = vec![PauliOp::I; n];
            ops[i] = PauliOp::Z;
            (-1.0, PauliString::new(ops))
        })
        .collect();
    Ok(Observable::new(terms)?)
}

/// Builds the VQE benchmark: two circuits (Z basis and X basis) with the
/// pre-optimized ansatz, and the optimized noiseless energy as the ideal.
pub fn vqe_instance(n: usize) -> Result<BenchmarkInstance, BenchError> {
    if n < 2 {
        return Err(BenchError::TooSmall(n));
    }
    if n > VQE_MAX_QUBITS {
        return Err(BenchError::SizeGuard {
            limit: VQE_MAX_QUBITS,
            got: n,
        });
    }
    let ham = tfim_hamiltonian(n, 1.0, 1.0)?;
    let (thetas, ideal) = optimize_ansatz(n, &ham)?;
    if ideal.abs() < super::qaoa::SCORE_GUARD {
        return Err(BenchError::ScoreUndefined(ideal.abs()));
    }
    let circuits = vec![
        ansatz(n, &thetas, false, true)?,
        ansatz(n, &thetas, true, true)?,
    ];
    Ok(BenchmarkInstance {
        id: format!("vqe-n{n}"),
        family: Family::Vqe,
        size: n,
        seed: 0,
        params: FamilyParams::Vqe { thetas },
        circuits,
        ideal: IdealPayload::TwoBasisEnergy {
            z_observable: zz_observable(n)?,
            x_observable: x_observable(n)?,
            value: ideal,
        },
    })
}

/// Same formula and guards as the QAOA score.
pub fn vqe_score(exp_energy: f64, ideal_energy: f64) -> Result<f64, BenchError> {
    qaoa_score(exp_energy, ideal_energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{sample, NoiseModel};

    #[test]
    fn single_spin_ground_energy_is_minus_h() {
        assert!((tfim_exact_ground_energy(1, 1.0, 1.0).unwrap() + 1.0).abs() < 1e-12);
        assert!((tfim_exact_ground_energy(1, 5.0, 2.5).unwrap() + 2.5).abs() < 1e-12);
    }

    #[test]
    fn two_spin_ground_energy_is_minus_sqrt_five() {
        let e = tfim_exact_ground_energy(2, 1.0, 1.0).unwrap();
        assert!((e + 5f64.sqrt()).abs() < 1e-9, "e = {e}");
    }

    /// Regression constant computed once with this diagonalizer.
    #[test]
    fn eight_spin_ground_energy_regression() {
        let e = tfim_exact_ground_energy(8, 1.0, 1.0).unwrap();
        assert!((e - (-9.837_951_447_459_426)).abs() < 1e-9, "e = {e}");
    }

    #[test]
    fn diagonalizer_guards_size() {
        assert!(matches!(
            tfim_exact_ground_energy(0, 1.0, 1.0),
            Err(BenchError::SizeGuard { .. })
        ));
        assert!(matches!(
            tfim_exact_ground_energy(15, 1.0, 1.0),
            Err(BenchError::SizeGuard { .. })
        ));
    }

    #[test]
    fn optimized_ansatz_reaches_one_percent_of_ground() {
        for n in 2..=6 {
            let inst = vqe_instance(n).unwrap();
            let IdealPayload::TwoBasisEnergy { value, .. } = inst.ideal else {
                panic!()
            };
            let exact = tfim_exact_ground_energy(n, 1.0, 1.0).unwrap();
            let rel = (value - exact).abs() / exact.abs();
            assert!(rel < 0.01, "n={n}: ansatz {value} vs exact {exact}");
        }
    }

    #[test]
    fn instance_is_deterministic() {
        let a = vqe_instance(3).unwrap();
        let b = vqe_instance(3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.circuits.len(), 2);
    }

    #[test]
    fn noiseless_sampled_score_is_high() {
        let inst = vqe_instance(3).unwrap();
        let h0 = sample(&inst.circuits[0], 2000, &NoiseModel::noiseless(), 41).unwrap();
        let h1 = sample(&inst.circuits[1], 2000, &NoiseModel::noiseless(), 42).unwrap();
        let s = inst.score(&[h0, h1]).unwrap();
        assert!(s > 0.97, "score = {s}");
    }

    #[test]
    fn score_matches_qaoa_formula() {
        assert_eq!(vqe_score(-3.0, -3.0).unwrap(), 1.0);
        assert_eq!(vqe_score(3.0, -3.0).unwrap(), 0.0);
        assert!((vqe_score(-1.5, -3.0).unwrap() - 0.75).abs() < 1e-12);
        assert!(matches!(
            vqe_score(0.0, 0.0),
            Err(BenchError::ScoreUndefined(_))
        ));
    }

    #[test]
    fn size_guards() {
        assert!(matches!(vqe_instance(1), Err(BenchError::TooSmall(1))));
        assert!(matches!(
            vqe_instance(17),
            Err(BenchError::SizeGuard { .. })
        ));
    }
}
