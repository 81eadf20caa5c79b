use rand::seq::index::sample as sample_indices;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::poly::SparsePolyF2;
use super::{sample_s, QgaBody, QgaDescription, StateDescription};
use crate::error::{invalid, Error, Result};
use crate::simcore::{sample_haar_unitary, Circuit, Gate, MAX_QUBITS};

/// Which sampler `G` to use. `Trivial` is the one-element family {I}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "candidate", rename_all = "kebab-case")]
pub enum Candidate {
    RandomCircuit { depth: usize },
    IqpDiagonal { num_gates: usize },
    IqpSparse { degree_bound: usize, term_bound: usize },
    Trivial,
}

impl Candidate {
    pub fn random_circuit_default(num_qubits: usize) -> Candidate {
        Candidate::RandomCircuit { depth: num_qubits.max(2) }
    }

    /// 5λ² gates.
    pub fn iqp_diagonal_default(num_qubits: usize) -> Candidate {
        Candidate::IqpDiagonal { num_gates: 5 * num_qubits * num_qubits }
    }

    /// d = 3 (clamped to λ), w = λ².
    pub fn iqp_sparse_default(num_qubits: usize) -> Candidate {
        Candidate::IqpSparse {
            degree_bound: 3.min(num_qubits),
            term_bound: num_qubits * num_qubits,
        }
    }

    pub fn is_commutative(&self) -> bool {
        !matches!(self, Candidate::RandomCircuit { .. })
    }
}

/// A QGA `(G, S)` at a fixed λ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QgaInstance {
    pub num_qubits: usize,
    #[serde(flatten)]
    pub candidate: Candidate,
}

impl QgaInstance {
    pub fn new(num_qubits: usize, candidate: Candidate) -> Result<QgaInstance> {
        if num_qubits == 0 {
            return Err(invalid("λ must be at least 1"));
        }
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { requested: num_qubits, cap: MAX_QUBITS });
        }
        if candidate == (Candidate::RandomCircuit { depth: 0 }) {
            return Err(invalid("depth must be at least 1"));
        }
        if let Candidate::IqpSparse { degree_bound, term_bound } = candidate {
            if degree_bound == 0 || degree_bound > num_qubits {
                return Err(invalid(format!("d = {degree_bound} must lie in [1, {num_qubits}]")));
            }
            if term_bound == 0 {
                return Err(invalid("w must be at least 1"));
            }
        }
        Ok(QgaInstance { num_qubits, candidate })
    }

    /// `G(1^λ)`
    pub fn sample_g<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<QgaDescription> {
        let n = self.num_qubits;
        match self.candidate {
            Candidate::RandomCircuit { depth } => sample_g_candidate1(n, depth, rng),
            Candidate::IqpDiagonal { num_gates } => sample_g_candidate2(n, num_gates, rng),
            Candidate::IqpSparse { degree_bound, term_bound } => {
                sample_g_candidate3(n, degree_bound, term_bound, rng)
            }
            Candidate::Trivial => Ok(QgaDescription::identity(n)),
        }
    }

    /// `S(1^λ)`
    pub fn sample_s(&self) -> StateDescription {
        sample_s(self.num_qubits).expect("validated λ")
    }
}

/// Brickwork of Haar-random two-qubit gates: layer `k` acts on pairs
/// `(i, i+1)` with `i ≡ k (mod 2)`. On a single qubit each layer is one
/// Haar-random single-qubit gate.
pub fn sample_g_candidate1<R: Rng + ?Sized>(
    num_qubits: usize,
    depth: usize,
    rng: &mut R,
) -> Result<QgaDescription> {
    if num_qubits == 0 {
        return Err(invalid("λ must be at least 1"));
    }
    let mut circuit = Circuit::new(num_qubits);
    for layer in 0..depth {
        if num_qubits == 1 {
            circuit.push(Gate::dense(vec![0], sample_haar_unitary(1, rng)?)?)?;
            continue;
        }
        let mut i = layer % 2;
        while i + 1 < num_qubits {
            circuit.push(Gate::dense(vec![i, i + 1], sample_haar_unitary(2, rng)?)?)?;
            i += 2;
        }
    }
    Ok(QgaDescription::from_circuit(circuit))
}

/// Random Z-diagonal layer: each gate is, with probability 1/2, T on a
/// uniform qubit, otherwise CS on a uniform pair (always T when λ = 1).
pub fn sample_g_candidate2<R: Rng + ?Sized>(
    num_qubits: usize,
    num_gates: usize,
    rng: &mut R,
) -> Result<QgaDescription> {
    if num_qubits == 0 {
        return Err(invalid("λ must be at least 1"));
    }
    let mut d = Circuit::new(num_qubits);
    for _ in 0..num_gates {
        let gate = if num_qubits == 1 || rng.random_bool(0.5) {
            Gate::t(rng.random_range(0..num_qubits))
        } else {
            let pair = sample_indices(rng, num_qubits, 2);
            Gate::cs(pair.index(0), pair.index(1))
        };
        d.push(gate)?;
    }
    QgaDescription::new(num_qubits, QgaBody::IqpDiagonalCircuit(d))
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Draws `term_bound` monomials i.i.d. uniform over the nonconstant
/// monomials of degree at most `degree_bound`, then drops repeats.
pub fn sample_g_candidate3<R: Rng + ?Sized>(
    num_qubits: usize,
    degree_bound: usize,
    term_bound: usize,
    rng: &mut R,
) -> Result<QgaDescription> {
    if num_qubits == 0 || num_qubits > 63 {
        return Err(invalid(format!("λ = {num_qubits} out of range")));
    }
    if degree_bound == 0 || degree_bound > num_qubits {
        return Err(invalid(format!("d = {degree_bound} must lie in [1, {num_qubits}]")));
    }
    if term_bound == 0 {
        return Err(invalid("w must be at least 1"));
    }
    let weights: Vec<u128> = (1..=degree_bound).map(|k| binomial(num_qubits, k)).collect();
    let total: u128 = weights.iter().sum();
    let mut terms = Vec::with_capacity(term_bound);
    for _ in 0..term_bound {
        let mut r = rng.random_range(0..total);
        let mut degree = 1;
        for (k, w) in weights.iter().enumerate() {
            if r < *w {
                degree = k + 1;
                break;
            }
            r -= w;
        }
        let mask = sample_indices(rng, num_qubits, degree).iter().fold(0u64, |m, i| m | (1 << i));
        terms.push(mask);
    }
    terms.sort_unstable();
    terms.dedup();
    let f = SparsePolyF2::new(num_qubits, degree_bound, term_bound, terms)?;
    QgaDescription::new(num_qubits, QgaBody::IqpSparsePoly(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use crate::simcore::StateVector;

    #[test]
    fn candidate1_depth_zero_is_identity() {
        let mut rng = rng_from_seed(1);
        let g = sample_g_candidate1(3, 0, &mut rng).unwrap();
        let psi = StateVector::uniform(3).unwrap();
        assert_eq!(g.apply(&psi).unwrap(), psi);
    }

    #[test]
    fn candidate1_brickwork_layout() {
        let mut rng = rng_from_seed(2);
        let g = sample_g_candidate1(4, 3, &mut rng).unwrap();
        let c = g.expand_circuit().unwrap();
        let targets: Vec<Vec<usize>> = c.gates().iter().map(|g| g.targets().to_vec()).collect();
        assert_eq!(targets, vec![vec![0, 1], vec![2, 3], vec![1, 2], vec![0, 1], vec![2, 3]]);
        let one = sample_g_candidate1(1, 2, &mut rng).unwrap();
        assert_eq!(one.expand_circuit().unwrap().gates().len(), 2);
    }

    #[test]
    fn candidate2_uses_only_t_and_cs() {
        use crate::simcore::GateKind;
        let mut rng = rng_from_seed(3);
        let g = sample_g_candidate2(4, 80, &mut rng).unwrap();
        let QgaBody::IqpDiagonalCircuit(d) = g.body() else { panic!() };
        assert_eq!(d.gates().len(), 80);
        assert!(d.gates().iter().all(|g| matches!(g.kind(), GateKind::T | GateKind::Cs)));
        assert!(d.gates().iter().any(|g| g.kind() == GateKind::T));
        assert!(d.gates().iter().any(|g| g.kind() == GateKind::Cs));
    }

    #[test]
    fn candidate3_bounds_hold_on_many_samples() {
        let mut rng = rng_from_seed(4);
        for _ in 0..1000 {
            let g = sample_g_candidate3(5, 2, 7, &mut rng).unwrap();
            let QgaBody::IqpSparsePoly(f) = g.body() else { panic!() };
            assert!(f.terms().len() <= 7);
            assert!(f.degree() <= 2);
            assert!(!f.has_constant_term());
            assert!(!f.eval(0));
        }
    }

    #[test]
    fn candidate3_rejects_bad_parameters() {
        let mut rng = rng_from_seed(5);
        assert!(sample_g_candidate3(3, 0, 4, &mut rng).is_err());
        assert!(sample_g_candidate3(3, 4, 4, &mut rng).is_err());
        assert!(sample_g_candidate3(3, 2, 0, &mut rng).is_err());
        assert!(QgaInstance::new(3, Candidate::IqpSparse { degree_bound: 0, term_bound: 2 }).is_err());
    }

    #[test]
    fn candidate3_degree_classes_weighted_by_count() {
        // λ = 4, d = 2: 4 linear and 6 quadratic monomials.
        let mut rng = rng_from_seed(6);
        let (mut linear, mut total) = (0usize, 0usize);
        for _ in 0..5000 {
            let g = sample_g_candidate3(4, 2, 1, &mut rng).unwrap();
            let QgaBody::IqpSparsePoly(f) = g.body() else { panic!() };
            total += 1;
            linear += (f.terms()[0].count_ones() == 1) as usize;
        }
        let rate = linear as f64 / total as f64;
        assert!((rate - 0.4).abs() < 0.03, "linear rate {rate}");
    }
}
