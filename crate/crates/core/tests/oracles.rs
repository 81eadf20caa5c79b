//! Library results checked against brute-force reference computations.

#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use num_complex::Complex64 as C64;
use qgalab::ega::{check_axioms, instantiate_exp_action, nr_prf, GroupAction, NrPrfKey};
use qgalab::games::estimate;
use qgalab::nrprfsg::{all_inputs, state_gen, PrfsgKey};
use qgalab::qga::{sample_g_candidate1, sample_g_candidate2, sample_g_candidate3, QgaBody, QgaDescription, SparsePolyF2};
use qgalab::qga::{sample_s, Candidate, QgaInstance};
use qgalab::seed::rng_from_seed;
use qgalab::simcore::*;
use rand::Rng;

/// Controlled-SWAP on local bits (control, a, b) = (0, 1, 2).
fn fredkin() -> DenseMatrix {
    let columns: Vec<Vec<C64>> = (0..8usize)
        .map(|j| {
            let i = if j & 1 == 1 { (j & 1) | ((j >> 1 & 1) << 2) | ((j >> 2 & 1) << 1) } else { j };
            let mut col = vec![c(0.0, 0.0); 8];
            col[i] = c(1.0, 0.0);
            col
        })
        .collect();
    DenseMatrix::from_columns(&columns).unwrap()
}

/// Ancilla after both registers: H, controlled-SWAP per qubit pair, H, then
/// the probability that the ancilla reads 0.
fn swap_test_by_circuit(a: &StateVector, b: &StateVector) -> f64 {
    let n = a.num_qubits();
    let anc = 2 * n;
    let mut gates = vec![Gate::h(anc)];
    for i in 0..n {
        gates.push(Gate::dense(vec![anc, i, n + i], fredkin()).unwrap());
    }
    gates.push(Gate::h(anc));
    let circuit = Circuit::from_gates(2 * n + 1, gates).unwrap();
    let input = StateVector::tensor_all(&[a.clone(), b.clone(), StateVector::zero(1).unwrap()]).unwrap();
    let out = run_circuit(&circuit, &input).unwrap();
    out.amplitudes().iter().enumerate().filter(|(i, _)| i >> anc & 1 == 0).map(|(_, x)| x.norm_sqr()).sum()
}

#[test]
fn swap_test_matches_controlled_swap_circuit() {
    let mut rng = rng_from_seed(100);
    for k in 0..100 {
        let n = 1 + k % 4;
        let a = sample_haar_state(n, &mut rng).unwrap();
        let b = if k % 10 == 0 { a.clone() } else { sample_haar_state(n, &mut rng).unwrap() };
        let analytic = swap_test_accept_prob(&a, &b).unwrap();
        assert!((analytic - swap_test_by_circuit(&a, &b)).abs() < 1e-10, "pair {k}");
        assert!((analytic - swap_test_circuit_oracle(a.amplitudes(), b.amplitudes())).abs() < 1e-10);
        let joint = a.tensor(&b).unwrap();
        assert!((swap_test_accept_prob_joint(&joint).unwrap() - analytic).abs() < 1e-10);
        assert_eq!(analytic, (1.0 + projection_prob(&a, &b).unwrap()) / 2.0);
    }
}

#[test]
fn hzh_is_x_by_matrix_product() {
    let x = mat_mul(&hadamard(), &mat_mul(&z(), &hadamard()));
    let circuit = Circuit::from_gates(1, vec![Gate::h(0), Gate::z(0), Gate::h(0)]).unwrap();
    let out = run_circuit(&circuit, &StateVector::zero(1).unwrap()).unwrap();
    assert!(max_diff(out.amplitudes(), &mat_vec(&x, &[c(1.0, 0.0), c(0.0, 0.0)])) < 1e-12);
    assert!((out.amplitudes()[1] - c(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn single_linear_term_is_x_on_first_qubit() {
    // H Z_1 H = X_1 on two qubits
    let m = kron(&identity(2), &mat_mul(&hadamard(), &mat_mul(&z(), &hadamard())));
    let f = SparsePolyF2::new(2, 1, 1, vec![0b01]).unwrap();
    let g = QgaDescription::new(2, QgaBody::IqpSparsePoly(f)).unwrap();
    let expected = mat_vec(&m, StateVector::from_label("00").unwrap().amplitudes());
    let out = g.apply(&StateVector::from_label("00").unwrap()).unwrap();
    assert!(max_diff(out.amplitudes(), &expected) < 1e-12);
    assert!(out.approx_eq(&StateVector::from_label("10").unwrap(), 1e-12));
}

#[test]
fn sparse_poly_fast_path_matches_dense_expansion() {
    let mut rng = rng_from_seed(101);
    for k in 0..100 {
        let n = 1 + k % 4;
        let d = rng.random_range(1..=n);
        let w = rng.random_range(1..=2 * n);
        let g = sample_g_candidate3(n, d, w, &mut rng).unwrap();
        let QgaBody::IqpSparsePoly(f) = g.body() else { panic!() };
        for x in 0..1u64 << n {
            assert_eq!(f.eval(x), poly_eval(f.terms(), x));
        }
        let psi = sample_haar_state(n, &mut rng).unwrap();
        let expected = mat_vec(&iqp_matrix(n, f.terms()), psi.amplitudes());
        assert!(max_diff(g.apply(&psi).unwrap().amplitudes(), &expected) < 1e-10, "sample {k}");
    }
}

/// D of candidate 2 rebuilt from its gate list.
fn diagonal_of(circuit: &Circuit) -> Vec<C64> {
    let n = circuit.num_qubits();
    (0..1usize << n)
        .map(|x| {
            circuit.gates().iter().fold(c(1.0, 0.0), |acc, gate| {
                let t = gate.targets();
                match gate.kind() {
                    GateKind::T if x >> t[0] & 1 == 1 => acc * C64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
                    GateKind::Cs if x >> t[0] & 1 == 1 && x >> t[1] & 1 == 1 => acc * c(0.0, 1.0),
                    GateKind::T | GateKind::Cs => acc,
                    other => panic!("unexpected gate {other:?}"),
                }
            })
        })
        .collect()
}

#[test]
fn diagonal_circuit_matches_dense_expansion() {
    let mut rng = rng_from_seed(102);
    for n in 1..=4 {
        let g = sample_g_candidate2(n, 5 * n * n, &mut rng).unwrap();
        let QgaBody::IqpDiagonalCircuit(d) = g.body() else { panic!() };
        let h = hadamard_all(n);
        let dense = mat_mul(&h, &mat_mul(&diag(&diagonal_of(d)), &h));
        let lib = g.to_dense().unwrap();
        for i in 0..1 << n {
            for j in 0..1 << n {
                assert!((lib.get(i, j) - dense[i][j]).norm() < 1e-10);
            }
        }
        // H g H is diagonal and g|0⟩ = H D |+⟩ has flat magnitudes after undoing H
        let conj = mat_mul(&h, &mat_mul(&dense, &h));
        for i in 0..1 << n {
            for j in 0..1 << n {
                if i != j {
                    assert!(conj[i][j].norm() < 1e-10);
                }
            }
        }
        let undone = StateVector::from_amplitudes(g.apply(&StateVector::zero(n).unwrap()).unwrap().amplitudes().to_vec())
            .unwrap()
            .hadamard_all();
        for a in undone.amplitudes() {
            assert!((a.norm() - 2f64.powf(-(n as f64) / 2.0)).abs() < 1e-10);
        }
    }
}

fn poly_element(n: usize, terms: Vec<u64>) -> QgaDescription {
    let f = SparsePolyF2::new(n, n, terms.len().max(1), terms).unwrap();
    QgaDescription::new(n, QgaBody::IqpSparsePoly(f)).unwrap()
}

#[test]
fn state_gen_matches_dense_chain_for_sparse_key() {
    let terms = [vec![0b01, 0b11], vec![0b10], vec![0b11]];
    let mats: Vec<Mat> = terms.iter().map(|t| iqp_matrix(2, t)).collect();
    let key = PrfsgKey::new(sample_s(2).unwrap(), terms.iter().map(|t| poly_element(2, t.clone())).collect()).unwrap();
    let e0 = StateVector::zero(2).unwrap();
    for x in all_inputs(2) {
        let mut chain = mats[0].clone();
        for (i, &bit) in x.iter().enumerate() {
            if bit {
                chain = mat_mul(&mats[i + 1], &chain);
            }
        }
        let expected = mat_vec(&chain, e0.amplitudes());
        assert!(max_diff(state_gen(&key, &x).unwrap().amplitudes(), &expected) < 1e-10, "x = {x:?}");
    }
}

/// Full matrix of a circuit whose gates all act on qubits [0, 1] of two.
fn two_qubit_circuit_matrix(g: &QgaDescription) -> Mat {
    let mut m = identity(4);
    for gate in g.expand_circuit().unwrap().gates() {
        assert_eq!(gate.targets(), &[0, 1]);
        let local = gate.local_matrix();
        let lm: Mat = (0..4).map(|i| (0..4).map(|j| local.get(i, j)).collect()).collect();
        m = mat_mul(&lm, &m);
    }
    m
}

#[test]
fn state_gen_order_for_noncommuting_key() {
    let mut rng = rng_from_seed(103);
    let elements: Vec<QgaDescription> = (0..3).map(|_| sample_g_candidate1(2, 3, &mut rng).unwrap()).collect();
    let mats: Vec<Mat> = elements.iter().map(two_qubit_circuit_matrix).collect();
    let key = PrfsgKey::new(sample_s(2).unwrap(), elements).unwrap();
    for x in all_inputs(2) {
        let mut chain = mats[0].clone();
        for (i, &bit) in x.iter().enumerate() {
            if bit {
                chain = mat_mul(&mats[i + 1], &chain);
            }
        }
        let expected = mat_vec(&chain, StateVector::zero(2).unwrap().amplitudes());
        assert!(max_diff(state_gen(&key, &x).unwrap().amplitudes(), &expected) < 1e-10);
    }
    // the reversed product differs for a generic circuit key
    let x = [true, true];
    let reversed = mat_vec(&mat_mul(&mats[0], &mat_mul(&mats[1], &mats[2])), StateVector::zero(2).unwrap().amplitudes());
    assert!(max_diff(state_gen(&key, &x).unwrap().amplitudes(), &reversed) > 1e-3);
}

fn projector(t: &StateVector, hit: bool) -> Mat {
    let a = t.amplitudes();
    (0..a.len())
        .map(|i| {
            (0..a.len())
                .map(|j| {
                    let p = a[i] * a[j].conj();
                    if hit {
                        p
                    } else if i == j {
                        c(1.0, 0.0) - p
                    } else {
                        -p
                    }
                })
                .collect()
        })
        .collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

#[test]
fn register_projectors_commute_in_every_order() {
    let mut rng = rng_from_seed(104);
    let joint = sample_haar_state(6, &mut rng).unwrap();
    let targets: Vec<StateVector> = (0..3).map(|_| sample_haar_state(2, &mut rng).unwrap()).collect();
    for pattern in 0..8usize {
        let hits: Vec<bool> = (0..3).map(|i| pattern >> i & 1 == 1).collect();
        let full = kron(&projector(&targets[2], hits[2]), &kron(&projector(&targets[1], hits[1]), &projector(&targets[0], hits[0])));
        let reference = norm_sqr(&mat_vec(&full, joint.amplitudes()));
        for order in permutations(&[0, 1, 2]) {
            let mut state = joint.clone();
            let mut p = 1.0;
            for &r in &order {
                let outcome = if hits[r] { ProjectionOutcome::Hit } else { ProjectionOutcome::Miss };
                let (q, next) = project_register(&state, r, 2, &targets[r], outcome).unwrap();
                p *= q;
                state = next;
            }
            assert!((p - reference).abs() < 1e-10, "pattern {pattern:03b} order {order:?}");
        }
    }
}

#[test]
fn product_state_hit_probabilities_multiply() {
    let mut rng = rng_from_seed(105);
    let (a, b) = (sample_haar_state(2, &mut rng).unwrap(), sample_haar_state(2, &mut rng).unwrap());
    let (ta, tb) = (sample_haar_state(2, &mut rng).unwrap(), sample_haar_state(2, &mut rng).unwrap());
    let joint = a.tensor(&b).unwrap();
    let pa = inner(ta.amplitudes(), a.amplitudes()).norm_sqr();
    let pb = inner(tb.amplitudes(), b.amplitudes()).norm_sqr();
    let (p0, after) = project_register(&joint, 0, 2, &ta, ProjectionOutcome::Hit).unwrap();
    let (p1, _) = project_register(&after, 1, 2, &tb, ProjectionOutcome::Hit).unwrap();
    let (q1, after) = project_register(&joint, 1, 2, &tb, ProjectionOutcome::Hit).unwrap();
    let (q0, _) = project_register(&after, 0, 2, &ta, ProjectionOutcome::Hit).unwrap();
    assert!((p0 - pa).abs() < 1e-12 && (p1 - pb).abs() < 1e-12);
    assert!((p0 * p1 - q0 * q1).abs() < 1e-12);
}

#[test]
fn measured_branch_of_probability_zero_is_an_error() {
    let zero = StateVector::zero(1).unwrap();
    let joint = zero.tensor(&zero).unwrap();
    assert_eq!(project_register(&joint, 0, 1, &zero, ProjectionOutcome::Miss), Err(qgalab::Error::ImpossibleBranch));
}

fn naive_pow(base: u64, exp: u64, p: u64) -> u64 {
    (0..exp).fold(1, |acc, _| acc * base % p)
}

#[test]
fn nr_prf_matches_direct_exponentiation() {
    let (p, q) = (23u64, 11u64);
    let ega = instantiate_exp_action(p, q, 2).unwrap();
    let mut rng = rng_from_seed(106);
    let key = NrPrfKey { elements: (0..9).map(|_| rng.random_range(1..q)).collect() };
    for bits in 0..256u32 {
        let x: Vec<bool> = (0..8).map(|i| bits >> i & 1 == 1).collect();
        let exponent = x.iter().zip(&key.elements[1..]).filter(|(b, _)| **b).fold(key.elements[0], |e, (_, g)| e * g % q);
        assert_eq!(nr_prf(&ega, &key, &x).unwrap(), naive_pow(2, exponent, p), "x = {bits:08b}");
    }
    // permuting generator indices together with the input bits changes nothing
    let x: Vec<bool> = (0..8).map(|i| i % 3 != 0).collect();
    let mut perm_key = key.clone();
    perm_key.elements[1..].reverse();
    let perm_x: Vec<bool> = x.iter().rev().copied().collect();
    assert_eq!(nr_prf(&ega, &key, &x).unwrap(), nr_prf(&ega, &perm_key, &perm_x).unwrap());
}

#[test]
fn exp_action_axioms_by_brute_force() {
    let ega = instantiate_exp_action(23, 11, 2).unwrap();
    let set = ega.set_elements();
    assert_eq!(set.len(), 10);
    for &s in &set {
        assert_eq!(ega.act(1, s), s);
        for a in 1..11u64 {
            for b in 1..11u64 {
                assert_eq!(naive_pow(s, a * b % 11, 23), naive_pow(naive_pow(s, b, 23), a, 23));
                assert_eq!(ega.act(ega.op(a, b), s), ega.act(a, ega.act(b, s)));
            }
        }
    }
    assert!(check_axioms(&ega).unwrap());
}

#[test]
fn wilson_interval_by_formula() {
    let (k, n) = (50.0f64, 100.0f64);
    let z = 1.959963984540054f64;
    let p = k / n;
    let center = (p + z * z / (2.0 * n)) / (1.0 + z * z / n);
    let half = z / (1.0 + z * z / n) * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
    let e = estimate(50, 100).unwrap();
    assert_eq!(e.estimate, 0.5);
    assert!((e.ci_low - (center - half)).abs() < 1e-12 && (e.ci_high - (center + half)).abs() < 1e-12);
    assert!((e.ci_low - 0.404).abs() < 1e-3 && (e.ci_high - 0.596).abs() < 1e-3);
}

#[test]
fn candidate3_subset_oracle_sanity() {
    // w = 1: one uniform monomial of degree k has overlap (1 − 2^{1−k})²
    assert!((candidate3_identity_overlap(3, 3, 1) - (3.0 * 0.25 + 0.5625) / 7.0).abs() < 1e-12);
    // λ = 1: f = x_1 always, and ⟨0|X|0⟩ = 0
    assert_eq!(candidate3_identity_overlap(1, 1, 1), 0.0);
    let q = QgaInstance::new(1, Candidate::IqpSparse { degree_bound: 1, term_bound: 1 }).unwrap();
    let g = q.sample_g(&mut rng_from_seed(1)).unwrap();
    assert!(g.apply(&StateVector::zero(1).unwrap()).unwrap().approx_eq(&StateVector::basis(1, 1).unwrap(), 1e-12));
}
