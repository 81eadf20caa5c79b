use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::gate::{apply_raw, Gate};
use super::state::StateVector;
use crate::error::{Error, Result};

/// An ordered gate list on a fixed number of qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitRepr")]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

#[derive(Deserialize)]
struct CircuitRepr {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl TryFrom<CircuitRepr> for Circuit {
    type Error = Error;
    fn try_from(r: CircuitRepr) -> Result<Circuit> {
        Circuit::from_gates(r.num_qubits, r.gates)
    }
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Circuit {
        Circuit { num_qubits, gates: Vec::new() }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Circuit> {
        if num_qubits == 0 {
            return Err(Error::InvalidParameter("circuit needs at least one qubit".into()));
        }
        for g in &gates {
            g.validate_for(num_qubits)?;
        }
        Ok(Circuit { num_qubits, gates })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate_for(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.gates.iter().all(Gate::is_diagonal)
    }

    pub(crate) fn run_raw(&self, amps: &mut [C64]) {
        for g in &self.gates {
            apply_raw(g, amps, g.targets());
        }
    }

    /// Applies the gates in order.
    pub fn run(&self, input: &StateVector) -> Result<StateVector> {
        if input.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                found: input.num_qubits(),
            });
        }
        let mut amps = input.amplitudes().to_vec();
        self.run_raw(&mut amps);
        Ok(StateVector::from_unitary_image(self.num_qubits, amps))
    }
}

pub fn run_circuit(circuit: &Circuit, input: &StateVector) -> Result<StateVector> {
    circuit.run(input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::DenseMatrix;

    #[test]
    fn empty_circuit_is_identity() {
        let psi = StateVector::normalized(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        assert_eq!(Circuit::new(1).run(&psi).unwrap(), psi);
    }

    #[test]
    fn hadamard_squared_is_identity() {
        let c = Circuit::from_gates(1, vec![Gate::h(0), Gate::h(0)]).unwrap();
        let out = c.run(&StateVector::zero(1).unwrap()).unwrap();
        assert!(out.approx_eq(&StateVector::zero(1).unwrap(), 1e-15));
    }

    #[test]
    fn hzh_maps_zero_to_one() {
        // HZH = X by explicit 2x2 product.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = DenseMatrix::from_rows(vec![
            vec![C64::new(s, 0.0), C64::new(s, 0.0)],
            vec![C64::new(s, 0.0), C64::new(-s, 0.0)],
        ])
        .unwrap();
        let z = DenseMatrix::from_rows(vec![
            vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
        ])
        .unwrap();
        let hzh = h.mul(&z).unwrap().mul(&h).unwrap();
        assert!(hzh.approx_eq(&Gate::x(0).local_matrix(), 1e-15));

        let c = Circuit::from_gates(1, vec![Gate::h(0), Gate::z(0), Gate::h(0)]).unwrap();
        let out = c.run(&StateVector::zero(1).unwrap()).unwrap();
        assert!(out.approx_eq(&StateVector::basis(1, 1).unwrap(), 1e-15));
    }

    #[test]
    fn rejects_out_of_range_gates_and_mismatched_inputs() {
        assert!(Circuit::from_gates(2, vec![Gate::cz(0, 2)]).is_err());
        let c = Circuit::new(2);
        assert!(c.run(&StateVector::zero(3).unwrap()).is_err());
        assert!(serde_json::from_str::<Circuit>(r#"{"num_qubits":1,"gates":[{"kind":"h","targets":[1]}]}"#).is_err());
    }
}
