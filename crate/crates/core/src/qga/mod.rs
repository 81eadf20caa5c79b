//! Quantum group actions: a sampler `G` of unitary descriptions and a sampler
//! `S` of state descriptions, plus the random-circuit and IQP candidates.

mod candidates;
mod poly;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use candidates::{
    sample_g_candidate1, sample_g_candidate2, sample_g_candidate3, Candidate, QgaInstance,
};
pub use poly::SparsePolyF2;

use crate::error::{Error, Result};
use crate::simcore::{hadamard_all_raw, Circuit, DenseMatrix, Gate, StateVector, DENSE_UNITARY_CAP};
use poly::PolyBody;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    GenericCircuit,
    IqpDiagonalCircuit,
    IqpSparsePoly,
}

#[derive(Clone, Debug, PartialEq)]
pub enum QgaBody {
    /// g is the circuit itself.
    GenericCircuit(Circuit),
    /// The diagonal layer D of g = H^{⊗λ} D H^{⊗λ}.
    IqpDiagonalCircuit(Circuit),
    /// D = Σ_x (−1)^{f(x)} |x⟩⟨x| of g = H^{⊗λ} D H^{⊗λ}.
    IqpSparsePoly(SparsePolyF2),
}

/// Classical description `[g]` of a group element.
#[derive(Clone, Debug, PartialEq)]
pub struct QgaDescription {
    num_qubits: usize,
    body: QgaBody,
}

impl QgaDescription {
    pub fn new(num_qubits: usize, body: QgaBody) -> Result<Self> {
        let inner = match &body {
            QgaBody::GenericCircuit(c) => c.num_qubits(),
            QgaBody::IqpDiagonalCircuit(c) => {
                if !c.is_diagonal() {
                    return Err(Error::InvalidGate("IQP layer must be diagonal".into()));
                }
                c.num_qubits()
            }
            QgaBody::IqpSparsePoly(f) => f.num_vars(),
        };
        if inner != num_qubits {
            return Err(Error::DimensionMismatch { expected: num_qubits, found: inner });
        }
        Ok(QgaDescription { num_qubits, body })
    }

    pub fn identity(num_qubits: usize) -> Self {
        QgaDescription { num_qubits, body: QgaBody::GenericCircuit(Circuit::new(num_qubits)) }
    }

    pub fn from_circuit(circuit: Circuit) -> Self {
        QgaDescription { num_qubits: circuit.num_qubits(), body: QgaBody::GenericCircuit(circuit) }
    }

    /// A generic-circuit description holding one dense unitary on all qubits.
    pub fn from_unitary(matrix: DenseMatrix) -> Result<Self> {
        let dim = matrix.dim();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::InvalidParameter("unitary side must be 2^n".into()));
        }
        let n = dim.trailing_zeros() as usize;
        if n > DENSE_UNITARY_CAP {
            return Err(Error::TooManyQubits { requested: n, cap: DENSE_UNITARY_CAP });
        }
        let gate = Gate::dense((0..n).collect(), matrix)?;
        Ok(Self::from_circuit(Circuit::from_gates(n, vec![gate])?))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn body(&self) -> &QgaBody {
        &self.body
    }

    pub fn variant(&self) -> Variant {
        match self.body {
            QgaBody::GenericCircuit(_) => Variant::GenericCircuit,
            QgaBody::IqpDiagonalCircuit(_) => Variant::IqpDiagonalCircuit,
            QgaBody::IqpSparsePoly(_) => Variant::IqpSparsePoly,
        }
    }

    pub fn is_iqp(&self) -> bool {
        !matches!(self.body, QgaBody::GenericCircuit(_))
    }

    /// Explicit gate list for the circuit variants; polynomial descriptions
    /// are never expanded.
    pub fn expand_circuit(&self) -> Option<Circuit> {
        match &self.body {
            QgaBody::GenericCircuit(c) => Some(c.clone()),
            QgaBody::IqpDiagonalCircuit(d) => {
                let n = self.num_qubits;
                let mut gates: Vec<Gate> = (0..n).map(Gate::h).collect();
                gates.extend(d.gates().iter().cloned());
                gates.extend((0..n).map(Gate::h));
                Some(Circuit::from_gates(n, gates).expect("same width"))
            }
            QgaBody::IqpSparsePoly(_) => None,
        }
    }

    pub(crate) fn apply_raw(&self, amps: &mut [C64]) {
        match &self.body {
            QgaBody::GenericCircuit(c) => c.run_raw(amps),
            QgaBody::IqpDiagonalCircuit(_) => {
                self.expand_circuit().expect("circuit variant").run_raw(amps)
            }
            QgaBody::IqpSparsePoly(f) => {
                hadamard_all_raw(amps);
                for (a, flip) in amps.iter_mut().zip(f.truth_table()) {
                    if flip {
                        *a = -*a;
                    }
                }
                hadamard_all_raw(amps);
            }
        }
    }

    /// g|state⟩
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, found: state.num_qubits() });
        }
        let mut amps = state.amplitudes().to_vec();
        self.apply_raw(&mut amps);
        Ok(StateVector::from_unitary_image(self.num_qubits, amps))
    }

    /// (g ⊗ I)|joint⟩ with g on register `register` of a multi-register state.
    pub fn apply_to_register(&self, joint: &StateVector, register: usize) -> Result<StateVector> {
        joint.map_register(register, self.num_qubits, |block| {
            self.apply_raw(block);
            Ok(())
        })
    }

    /// Dense matrix of g, by applying it to each basis vector.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        if self.num_qubits > DENSE_UNITARY_CAP {
            return Err(Error::TooManyQubits { requested: self.num_qubits, cap: DENSE_UNITARY_CAP });
        }
        let dim = 1usize << self.num_qubits;
        let columns: Vec<Vec<C64>> = (0..dim)
            .map(|k| {
                let mut col = vec![C64::new(0.0, 0.0); dim];
                col[k] = C64::new(1.0, 0.0);
                self.apply_raw(&mut col);
                col
            })
            .collect();
        DenseMatrix::from_columns(&columns)
    }
}

pub fn apply_qga(g: &QgaDescription, state: &StateVector) -> Result<StateVector> {
    g.apply(state)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BodyRepr {
    Poly(PolyBody),
    Circuit(Circuit),
}

#[derive(Serialize, Deserialize)]
struct DescriptionRepr {
    variant: Variant,
    num_qubits: usize,
    body: BodyRepr,
}

impl Serialize for QgaDescription {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let body = match &self.body {
            QgaBody::GenericCircuit(c) | QgaBody::IqpDiagonalCircuit(c) => BodyRepr::Circuit(c.clone()),
            QgaBody::IqpSparsePoly(f) => BodyRepr::Poly(f.to_body()),
        };
        DescriptionRepr { variant: self.variant(), num_qubits: self.num_qubits, body }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QgaDescription {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = DescriptionRepr::deserialize(deserializer)?;
        let body = match (repr.variant, repr.body) {
            (Variant::GenericCircuit, BodyRepr::Circuit(c)) => QgaBody::GenericCircuit(c),
            (Variant::IqpDiagonalCircuit, BodyRepr::Circuit(c)) => QgaBody::IqpDiagonalCircuit(c),
            (Variant::IqpSparsePoly, BodyRepr::Poly(p)) => QgaBody::IqpSparsePoly(
                SparsePolyF2::from_body(repr.num_qubits, p).map_err(D::Error::custom)?,
            ),
            (v, _) => return Err(D::Error::custom(format!("body does not match variant {v:?}"))),
        };
        QgaDescription::new(repr.num_qubits, body).map_err(D::Error::custom)
    }
}

/// Classical description `[|s⟩]` of a state. Every candidate's `S` is the
/// computational basis state |0^λ⟩.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateDescription {
    Basis { num_qubits: usize, index: u64 },
}

impl StateDescription {
    pub fn num_qubits(&self) -> usize {
        match self {
            StateDescription::Basis { num_qubits, .. } => *num_qubits,
        }
    }

    pub fn expand(&self) -> Result<StateVector> {
        match self {
            StateDescription::Basis { num_qubits, index } => {
                StateVector::basis(*num_qubits, *index as usize)
            }
        }
    }
}

/// `S(1^λ)`: the description of |0^λ⟩.
pub fn sample_s(num_qubits: usize) -> Result<StateDescription> {
    if num_qubits == 0 {
        return Err(Error::InvalidParameter("λ must be at least 1".into()));
    }
    Ok(StateDescription::Basis { num_qubits, index: 0 })
}
