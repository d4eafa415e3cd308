//! Hamiltonian-simulation benchmark: first-order Trotterization of the 1D
//! transverse-field Ising chain under a cosine drive, scored on the average
//! magnetization of the final state.

use super::{BenchError, BenchmarkInstance, Family, FamilyParams, IdealPayload};
use crate::circuit::{Circuit, Gate};
use crate::pauli::{Observable, PauliOp, PauliString};
use crate::sim::simulate_state;

/// Guard for the noiseless ideal-payload computation.
pub const HAMSIM_MAX_QUBITS: usize = 20;

/// Trotterized-drive parameters. The defaults follow the crate-wide
/// convention `J_z = 1`, `eps_ph = 1`, `omega_ph = 2 pi`, `dt = 0.1`,
/// four steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfimParams {
    pub j_z: f64,
    pub eps_ph: f64,
    pub omega_ph: f64,
    pub dt: f64,
    pub steps: usize,
}

impl Default for TfimParams {
    fn default() -> Self {
        TfimParams {
            j_z: 1.0,
            eps_ph: 1.0,
            omega_ph: 2.0 * std::f64::consts::PI,
            dt: 0.1,
            steps: 4,
        }
    }
}

impl TfimParams {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.dt > 0.0
            && [self.j_z, self.eps_ph, self.omega_ph]
                .iter()
                .all(|v| v.is_finite())
        {
            Ok(())
        } else {
            Err(BenchError::BadEcConfig)
        }
    }
}

/// The average-magnetization observable `(1/n) sum Z_i`.
pub fn magnetization_observable(n: usize) -> Result<Observable, BenchError> {
    let terms = (0..n)
        .map(|i| {
            let mut ops = vec![PauliOp::I; n];
            ops[i] = PauliOp::Z;
            (1.0 / n as f64, PauliString::new(ops))
        })
        .collect();
    Ok(Observable::new(terms)?)
}

fn trotter_circuit(n: usize, params: &TfimParams, measure: bool) -> Result<Circuit, BenchError> {
    let mut c = Circuit::new();
    c.add_qreg("q", n)?;
    if measure {
        c.add_creg("c", n)?;
    }
    for step in 0..params.steps {
        let t = step as f64 * params.dt;
        for i in 0..n - 1 {
            c.push_gate(Gate::Rzz(-2.0 * params.j_z * params.dt), &[i, i + 1])?;
        }
        let drive = -2.0 * params.eps_ph * (params.omega_ph * t).cos() * params.dt;
        for q in 0..n {
            c.push_gate(Gate::Rx(drive), &[q])?;
        }
    }
    if measure {
        for q in 0..n {
            c.measure(q, q)?;
        }
    }
    Ok(c)
}

/// First-order Trotter evolution from `|0..0>` with a terminal Z-basis
/// measurement. The ideal payload is the noiseless circuit's magnetization,
/// so the score isolates hardware noise from Trotter error.
pub fn hamsim_instance(n: usize, params: &TfimParams) -> Result<BenchmarkInstance, BenchError> {
    if n < 2 {
        return Err(BenchError::TooSmall(n));
    }
    if n > HAMSIM_MAX_QUBITS {
        return Err(BenchError::SizeGuard {
            limit: HAMSIM_MAX_QUBITS,
            got: n,
        });
    }
    params.validate()?;
    let circuit = trotter_circuit(n, params, true)?;
    let state = simulate_state(&trotter_circuit(n, params, false)?)?;
    let ideal = state.observable_expectation(&magnetization_observable(n)?);
    Ok(BenchmarkInstance {
        id: format!("hamsim-n{n}"),
        family: Family::Hamsim,
        size: n,
        seed: 0,
        params: FamilyParams::Hamsim {
            j_z: params.j_z,
            eps_ph: params.eps_ph,
            omega_ph: params.omega_ph,
            dt: params.dt,
            steps: params.steps,
        },
        circuits: vec![circuit],
        ideal: IdealPayload::Magnetization { value: ideal },
    })
}

/// Magnetization score `1 - |ideal - exp| / 2`.
pub fn hamsim_score(exp_mz: f64, ideal_mz: f64) -> f64 {
    (1.0 - (ideal_mz - exp_mz).abs() / 2.0).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::OpKind;
    use crate::pauli::expectation_from_histogram;
    use crate::sim::{sample, NoiseModel};

    #[test]
    fn zero_steps_is_fully_polarized() {
        let params = TfimParams {
            steps: 0,
            ..TfimParams::default()
        };
        let inst = hamsim_instance(3, &params).unwrap();
        let IdealPayload::Magnetization { value } = inst.ideal else {
            panic!()
        };
        assert!((value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn score_formula() {
        assert_eq!(hamsim_score(0.8, 0.8), 1.0);
        assert_eq!(hamsim_score(-1.0, 1.0), 0.0);
        assert!((hamsim_score(0.0, 1.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn step_structure() {
        let params = TfimParams::default();
        let inst = hamsim_instance(4, &params).unwrap();
        let c = &inst.circuits[0];
        let rzz = c
            .instructions()
            .iter()
            .filter(|i| matches!(i.kind, OpKind::Gate(Gate::Rzz(_))))
            .count();
        let rx = c
            .instructions()
            .iter()
            .filter(|i| matches!(i.kind, OpKind::Gate(Gate::Rx(_))))
            .count();
        assert_eq!(rzz, 4 * 3);
        assert_eq!(rx, 4 * 4);
    }

    #[test]
    fn histogram_estimator_matches_statevector() {
        let inst = hamsim_instance(3, &TfimParams::default()).unwrap();
        let IdealPayload::Magnetization { value } = inst.ideal else {
            panic!()
        };
        let h = sample(&inst.circuits[0], 50_000, &NoiseModel::noiseless(), 77).unwrap();
        let obs = magnetization_observable(3).unwrap();
        let est = expectation_from_histogram(&obs, &h).unwrap();
        assert!((est - value).abs() < 0.02, "est {est} vs ideal {value}");
        let s = inst.score(&[h]).unwrap();
        assert!(s > 0.99, "score = {s}");
    }

    #[test]
    fn guards() {
        assert!(matches!(
            hamsim_instance(1, &TfimParams::default()),
            Err(BenchError::TooSmall(1))
        ));
        assert!(matches!(
            hamsim_instance(21, &TfimParams::default()),
            Err(BenchError::SizeGuard { .. })
        ));
        let bad = TfimParams {
            dt: 0.0,
            ..TfimParams::default()
        };
        assert!(hamsim_instance(3, &bad).is_err());
    }
}
