use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::dense::DenseMatrix;
use super::state::StateVector;
use super::NORM_TOL;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    T,
    Z,
    S,
    X,
    Cs,
    Cnot,
    Cz,
    /// Diagonal gate with a tabulated phase per local basis state.
    Phase,
    Dense,
}

impl GateKind {
    fn arity(self) -> Option<usize> {
        match self {
            GateKind::H | GateKind::T | GateKind::Z | GateKind::S | GateKind::X => Some(1),
            GateKind::Cs | GateKind::Cnot | GateKind::Cz => Some(2),
            GateKind::Phase | GateKind::Dense => None,
        }
    }

    pub fn is_diagonal(self) -> bool {
        matches!(
            self,
            GateKind::T | GateKind::Z | GateKind::S | GateKind::Cs | GateKind::Cz | GateKind::Phase
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GatePayload {
    /// Radians; entry `k` is the phase on local basis state `k`, where bit
    /// `j` of `k` is the value of `targets[j]`.
    Phases { phases: Vec<f64> },
    /// Acts on local index with bit `j` = `targets[j]`.
    Matrix { matrix: DenseMatrix },
}

/// One gate of a circuit. For CNOT the targets are `[control, target]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateRepr")]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    payload: Option<GatePayload>,
}

#[derive(Deserialize)]
struct GateRepr {
    kind: GateKind,
    targets: Vec<usize>,
    #[serde(default)]
    payload: Option<GatePayload>,
}

impl TryFrom<GateRepr> for Gate {
    type Error = Error;
    fn try_from(r: GateRepr) -> Result<Gate> {
        Gate::new(r.kind, r.targets, r.payload)
    }
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>, payload: Option<GatePayload>) -> Result<Gate> {
        let mut sorted = targets.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != targets.len() || targets.is_empty() {
            return Err(Error::InvalidGate(format!("targets must be distinct and non-empty: {targets:?}")));
        }
        if let Some(a) = kind.arity() {
            if targets.len() != a {
                return Err(Error::InvalidGate(format!("{kind:?} takes {a} targets")));
            }
            if payload.is_some() {
                return Err(Error::InvalidGate(format!("{kind:?} takes no payload")));
            }
        }
        let local_dim = 1usize << targets.len();
        match (kind, &payload) {
            (GateKind::Phase, Some(GatePayload::Phases { phases })) => {
                if phases.len() != local_dim || phases.iter().any(|p| !p.is_finite()) {
                    return Err(Error::InvalidGate("phase table must have 2^k finite entries".into()));
                }
            }
            (GateKind::Dense, Some(GatePayload::Matrix { matrix })) => {
                if matrix.dim() != local_dim {
                    return Err(Error::DimensionMismatch { expected: local_dim, found: matrix.dim() });
                }
                let deviation = matrix.unitarity_deviation();
                if deviation > NORM_TOL {
                    return Err(Error::NotUnitary { deviation });
                }
            }
            (GateKind::Phase | GateKind::Dense, _) => {
                return Err(Error::InvalidGate(format!("{kind:?} needs a matching payload")));
            }
            _ => {}
        }
        Ok(Gate { kind, targets, payload })
    }

    fn fixed(kind: GateKind, targets: Vec<usize>) -> Gate {
        Gate::new(kind, targets, None).expect("fixed gate with valid arity")
    }

    pub fn h(q: usize) -> Gate {
        Gate::fixed(GateKind::H, vec![q])
    }
    pub fn t(q: usize) -> Gate {
        Gate::fixed(GateKind::T, vec![q])
    }
    pub fn z(q: usize) -> Gate {
        Gate::fixed(GateKind::Z, vec![q])
    }
    pub fn s(q: usize) -> Gate {
        Gate::fixed(GateKind::S, vec![q])
    }
    pub fn x(q: usize) -> Gate {
        Gate::fixed(GateKind::X, vec![q])
    }
    /// Panics if `a == b`.
    pub fn cs(a: usize, b: usize) -> Gate {
        Gate::fixed(GateKind::Cs, vec![a, b])
    }
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::fixed(GateKind::Cnot, vec![control, target])
    }
    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::fixed(GateKind::Cz, vec![a, b])
    }
    pub fn phase(targets: Vec<usize>, phases: Vec<f64>) -> Result<Gate> {
        Gate::new(GateKind::Phase, targets, Some(GatePayload::Phases { phases }))
    }
    pub fn dense(targets: Vec<usize>, matrix: DenseMatrix) -> Result<Gate> {
        Gate::new(GateKind::Dense, targets, Some(GatePayload::Matrix { matrix }))
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn payload(&self) -> Option<&GatePayload> {
        self.payload.as_ref()
    }

    pub fn is_diagonal(&self) -> bool {
        self.kind.is_diagonal()
    }

    pub fn validate_for(&self, num_qubits: usize) -> Result<()> {
        if let Some(&q) = self.targets.iter().find(|&&q| q >= num_qubits) {
            return Err(Error::DimensionMismatch { expected: num_qubits, found: q + 1 });
        }
        Ok(())
    }

    /// The gate's local matrix, on the local index convention of the payload.
    pub fn local_matrix(&self) -> DenseMatrix {
        let dim = 1usize << self.targets.len();
        let mut columns = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut col = vec![C64::new(0.0, 0.0); dim];
            col[k] = C64::new(1.0, 0.0);
            apply_raw(self, &mut col, &local_targets(self.targets.len()));
            columns.push(col);
        }
        DenseMatrix::from_columns(&columns).expect("square by construction")
    }
}

fn local_targets(k: usize) -> Vec<usize> {
    (0..k).collect()
}

fn phase_on_set_bits(amps: &mut [C64], mask: usize, phase: C64) {
    for (i, a) in amps.iter_mut().enumerate() {
        if i & mask == mask {
            *a *= phase;
        }
    }
}

/// Applies `gate` with its targets remapped to `targets` on raw amplitudes.
pub(crate) fn apply_raw(gate: &Gate, amps: &mut [C64], targets: &[usize]) {
    match gate.kind {
        GateKind::H => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let bit = 1usize << targets[0];
            for i in 0..amps.len() {
                if i & bit == 0 {
                    let (a, b) = (amps[i], amps[i | bit]);
                    amps[i] = (a + b) * s;
                    amps[i | bit] = (a - b) * s;
                }
            }
        }
        GateKind::X => {
            let bit = 1usize << targets[0];
            for i in 0..amps.len() {
                if i & bit == 0 {
                    amps.swap(i, i | bit);
                }
            }
        }
        GateKind::Z => phase_on_set_bits(amps, 1 << targets[0], C64::new(-1.0, 0.0)),
        GateKind::S => phase_on_set_bits(amps, 1 << targets[0], C64::new(0.0, 1.0)),
        GateKind::T => phase_on_set_bits(amps, 1 << targets[0], C64::from_polar(1.0, FRAC_PI_4)),
        GateKind::Cs => {
            phase_on_set_bits(amps, (1 << targets[0]) | (1 << targets[1]), C64::new(0.0, 1.0))
        }
        GateKind::Cz => {
            phase_on_set_bits(amps, (1 << targets[0]) | (1 << targets[1]), C64::new(-1.0, 0.0))
        }
        GateKind::Cnot => {
            let (c, t) = (1usize << targets[0], 1usize << targets[1]);
            for i in 0..amps.len() {
                if i & c != 0 && i & t == 0 {
                    amps.swap(i, i | t);
                }
            }
        }
        GateKind::Phase => {
            let Some(GatePayload::Phases { phases }) = &gate.payload else { unreachable!() };
            let table: Vec<C64> = phases.iter().map(|&p| C64::from_polar(1.0, p)).collect();
            for (i, a) in amps.iter_mut().enumerate() {
                let local = local_index(i, targets);
                if phases[local] != 0.0 {
                    *a *= table[local];
                }
            }
        }
        GateKind::Dense => {
            let Some(GatePayload::Matrix { matrix }) = &gate.payload else { unreachable!() };
            let mask: usize = targets.iter().map(|&t| 1usize << t).sum();
            let k = targets.len();
            let mut inp = vec![C64::new(0.0, 0.0); 1 << k];
            let mut out = inp.clone();
            let offsets: Vec<usize> = (0..(1usize << k))
                .map(|local| (0..k).filter(|j| local >> j & 1 == 1).map(|j| 1 << targets[j]).sum())
                .collect();
            for base in 0..amps.len() {
                if base & mask != 0 {
                    continue;
                }
                for (slot, off) in inp.iter_mut().zip(&offsets) {
                    *slot = amps[base | off];
                }
                matrix.apply_into(&inp, &mut out);
                for (v, off) in out.iter().zip(&offsets) {
                    amps[base | off] = *v;
                }
            }
        }
    }
}

fn local_index(i: usize, targets: &[usize]) -> usize {
    targets.iter().enumerate().fold(0, |acc, (j, &t)| acc | (((i >> t) & 1) << j))
}

/// Apply one gate to a state.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    gate.validate_for(state.num_qubits())?;
    let mut amps = state.amplitudes().to_vec();
    apply_raw(gate, &mut amps, gate.targets());
    Ok(StateVector::from_unitary_image(state.num_qubits(), amps))
}
