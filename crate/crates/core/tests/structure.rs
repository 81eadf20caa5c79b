//! Structural properties of the candidates and the NR oracles.

mod common;

use common::*;
use qgalab::nrprfsg::{all_inputs, keygen, state_gen, Oracle, OracleMode};
use qgalab::qga::{Candidate, QgaInstance};
use qgalab::seed::{rng_from_seed, SeedTree};
use qgalab::simcore::*;

fn candidates(n: usize) -> [Candidate; 3] {
    [Candidate::random_circuit_default(n), Candidate::iqp_diagonal_default(n), Candidate::iqp_sparse_default(n)]
}

#[test]
fn base_state_is_all_zeros() {
    for n in 1..=4 {
        for c in candidates(n) {
            let s = QgaInstance::new(n, c).unwrap().sample_s().expand().unwrap();
            assert_eq!(s, StateVector::zero(n).unwrap());
        }
    }
}

#[test]
fn random_circuits_act_differently() {
    let qga = QgaInstance::new(3, Candidate::RandomCircuit { depth: 4 }).unwrap();
    let mut rng = rng_from_seed(300);
    let zero = StateVector::zero(3).unwrap();
    let distinct = (0..100)
        .filter(|_| {
            let a = qga.sample_g(&mut rng).unwrap().apply(&zero).unwrap();
            let b = qga.sample_g(&mut rng).unwrap().apply(&zero).unwrap();
            projection_prob(&a, &b).unwrap() < 0.999
        })
        .count();
    assert!(distinct >= 99);
}

#[test]
fn iqp_candidates_commute_and_fix_plus() {
    let mut rng = rng_from_seed(301);
    for c in [Candidate::iqp_diagonal_default(3), Candidate::iqp_sparse_default(3)] {
        let qga = QgaInstance::new(3, c).unwrap();
        let (g, h) = (qga.sample_g(&mut rng).unwrap(), qga.sample_g(&mut rng).unwrap());
        for _ in 0..100 {
            let psi = sample_haar_state(3, &mut rng).unwrap();
            let gh = g.apply(&h.apply(&psi).unwrap()).unwrap();
            let hg = h.apply(&g.apply(&psi).unwrap()).unwrap();
            assert!(max_diff(gh.amplitudes(), hg.amplitudes()) < 1e-10);
        }
        let plus = StateVector::uniform(3).unwrap();
        for _ in 0..50 {
            let out = qga.sample_g(&mut rng).unwrap().apply(&plus).unwrap();
            assert!((projection_prob(&plus, &out).unwrap() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn random_circuits_do_not_commute() {
    let qga = QgaInstance::new(3, Candidate::random_circuit_default(3)).unwrap();
    let mut rng = rng_from_seed(302);
    let (g, h) = (qga.sample_g(&mut rng).unwrap(), qga.sample_g(&mut rng).unwrap());
    let psi = sample_haar_state(3, &mut rng).unwrap();
    let gh = g.apply(&h.apply(&psi).unwrap()).unwrap();
    let hg = h.apply(&g.apply(&psi).unwrap()).unwrap();
    assert!(max_diff(gh.amplitudes(), hg.amplitudes()) > 1e-3);
}

fn open(mode: OracleMode, qga: &QgaInstance, key: &qgalab::nrprfsg::PrfsgKey, seed: u64) -> Oracle {
    Oracle::open(mode, key, qga, SeedTree::new(seed).stream("oracle", 0)).unwrap()
}

#[test]
fn boundary_hybrids_match_real_and_hybrid() {
    for c in candidates(3) {
        let qga = QgaInstance::new(3, c).unwrap();
        let key = keygen(&qga, 3, &mut rng_from_seed(303)).unwrap();
        let mut real = open(OracleMode::Real, &qga, &key, 1);
        let mut game0 = open(OracleMode::Game(0), &qga, &key, 1);
        let mut hybrid = open(OracleMode::Hybrid, &qga, &key, 2);
        let mut game_last = open(OracleMode::Game(3), &qga, &key, 2);
        for x in all_inputs(3) {
            let r = real.query(&x).unwrap();
            assert!(projection_prob(&r, &game0.query(&x).unwrap()).unwrap() >= 1.0 - 1e-10);
            assert!(projection_prob(&r, &state_gen(&key, &x).unwrap()).unwrap() >= 1.0 - 1e-10);
            assert_eq!(hybrid.query(&x).unwrap(), game_last.query(&x).unwrap());
        }
    }
}

#[test]
fn memoized_oracles_are_consistent() {
    let qga = QgaInstance::new(3, Candidate::iqp_sparse_default(3)).unwrap();
    let key = keygen(&qga, 3, &mut rng_from_seed(304)).unwrap();
    for mode in [OracleMode::Hybrid, OracleMode::Ideal, OracleMode::Game(1), OracleMode::Real] {
        let mut oracle = open(mode, &qga, &key, 3);
        for x in all_inputs(3) {
            let a = oracle.query(&x).unwrap();
            let b = oracle.query(&x).unwrap();
            assert_eq!(projection_prob(&a, &b).unwrap(), 1.0, "{mode:?}");
        }
        assert_eq!(oracle.query_count(), 16);
    }
}

#[test]
fn prefix_hybrid_shares_answers_on_common_prefix() {
    let qga = QgaInstance::new(2, Candidate::random_circuit_default(2)).unwrap();
    let key = keygen(&qga, 3, &mut rng_from_seed(305)).unwrap();
    let mut oracle = open(OracleMode::Game(2), &qga, &key, 4);
    // inputs agreeing on the first two bits differ only by the last key element
    let a = oracle.query(&[true, false, false]).unwrap();
    let b = oracle.query(&[true, false, true]).unwrap();
    let expected = key.group_elements()[3].apply(&a).unwrap();
    assert!(b.approx_eq(&expected, 1e-12));
    assert_eq!(oracle.memo_len(), 1);
}
