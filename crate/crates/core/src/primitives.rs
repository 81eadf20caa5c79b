//! Primitives built directly on a QGA: one-way and pseudorandom state
//! generators, private quantum money, and symmetric-key encryption.
//!
//! Honest parties hold physical states, so banknotes and ciphertexts are
//! carried as expanded [`StateVector`]s while keys only hold descriptions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::qga::{QgaDescription, QgaInstance, StateDescription};
use crate::simcore::{
    bernoulli, projection_prob, projection_sample, sample_haar_state, swap_test_accept_prob,
    swap_test_accept_prob_joint, StateVector,
};

/// `([|s⟩], [g])`, the key shape shared by the OWSG, the PRSG and money.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupStateKey {
    pub state_desc: StateDescription,
    pub group_desc: QgaDescription,
}

pub type OwsgKey = GroupStateKey;
pub type PrsgKey = GroupStateKey;
pub type MoneyKey = GroupStateKey;

impl GroupStateKey {
    fn sample<R: Rng + ?Sized>(qga: &QgaInstance, rng: &mut R) -> Result<Self> {
        let state_desc = qga.sample_s();
        let group_desc = qga.sample_g(rng)?;
        Ok(GroupStateKey { state_desc, group_desc })
    }

    /// g|s⟩
    pub fn orbit_state(&self) -> Result<StateVector> {
        self.group_desc.apply(&self.state_desc.expand()?)
    }
}

pub fn owsg_keygen<R: Rng + ?Sized>(qga: &QgaInstance, rng: &mut R) -> Result<OwsgKey> {
    GroupStateKey::sample(qga, rng)
}

/// |s⟩ ⊗ g|s⟩, with |s⟩ in register 0.
pub fn owsg_state_gen(key: &OwsgKey) -> Result<StateVector> {
    key.state_desc.expand()?.tensor(&key.orbit_state()?)
}

/// Applies g′ to register 0 of `phi` and returns the SWAP-test acceptance
/// probability between the two registers.
pub fn owsg_accept_prob(candidate: &OwsgKey, phi: &StateVector) -> Result<f64> {
    let width = candidate.group_desc.num_qubits();
    if phi.num_qubits() != 2 * width {
        return Err(Error::DimensionMismatch { expected: 2 * width, found: phi.num_qubits() });
    }
    let moved = candidate.group_desc.apply_to_register(phi, 0)?;
    swap_test_accept_prob_joint(&moved)
}

pub fn owsg_verify<R: Rng + ?Sized>(candidate: &OwsgKey, phi: &StateVector, rng: &mut R) -> Result<bool> {
    Ok(bernoulli(owsg_accept_prob(candidate, phi)?, rng))
}

pub fn prsg_keygen<R: Rng + ?Sized>(qga: &QgaInstance, rng: &mut R) -> Result<PrsgKey> {
    GroupStateKey::sample(qga, rng)
}

/// g|s⟩
pub fn prsg_state_gen(key: &PrsgKey) -> Result<StateVector> {
    key.orbit_state()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Banknote {
    pub note: StateVector,
}

pub fn money_keygen<R: Rng + ?Sized>(qga: &QgaInstance, rng: &mut R) -> Result<MoneyKey> {
    GroupStateKey::sample(qga, rng)
}

pub fn money_mint(key: &MoneyKey) -> Result<Banknote> {
    Ok(Banknote { note: key.orbit_state()? })
}

pub fn money_accept_prob(key: &MoneyKey, rho: &StateVector) -> Result<f64> {
    projection_prob(&key.orbit_state()?, rho)
}

/// Projects `rho` onto g|x⟩.
pub fn money_verify<R: Rng + ?Sized>(key: &MoneyKey, rho: &StateVector, rng: &mut R) -> Result<bool> {
    Ok(projection_sample(&key.orbit_state()?, rho, rng)?.is_hit())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkeKey1 {
    pub g: QgaDescription,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkeKeyMulti {
    pub copies: usize,
    pub message_len: usize,
    pub keys: Vec<SkeKey1>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ciphertext1 {
    pub first: StateVector,
    pub second: StateVector,
}

pub fn ske1_keygen<R: Rng + ?Sized>(qga: &QgaInstance, rng: &mut R) -> Result<SkeKey1> {
    Ok(SkeKey1 { g: qga.sample_g(rng)? })
}

/// b = 0: (|s⟩, g|s⟩); b = 1: (|s⟩, |s′⟩), all states Haar-random.
pub fn ske1_enc<R: Rng + ?Sized>(key: &SkeKey1, b: bool, rng: &mut R) -> Result<Ciphertext1> {
    let n = key.g.num_qubits();
    let first = sample_haar_state(n, rng)?;
    let second = if b { sample_haar_state(n, rng)? } else { key.g.apply(&first)? };
    Ok(Ciphertext1 { first, second })
}

/// Pr[Dec = 0], the SWAP-test pass probability after g ⊗ I.
pub fn ske1_zero_prob(key: &SkeKey1, ct: &Ciphertext1) -> Result<f64> {
    swap_test_accept_prob(&key.g.apply(&ct.first)?, &ct.second)
}

/// SWAP test passes ↦ 0, fails ↦ 1.
pub fn ske1_dec<R: Rng + ?Sized>(key: &SkeKey1, ct: &Ciphertext1, rng: &mut R) -> Result<bool> {
    Ok(!bernoulli(ske1_zero_prob(key, ct)?, rng))
}

pub fn ske_multi_keygen<R: Rng + ?Sized>(
    qga: &QgaInstance,
    copies: usize,
    message_len: usize,
    rng: &mut R,
) -> Result<SkeKeyMulti> {
    if copies == 0 || message_len == 0 {
        return Err(invalid("t and ℓ must be at least 1"));
    }
    let keys = (0..copies * message_len).map(|_| ske1_keygen(qga, rng)).collect::<Result<_>>()?;
    Ok(SkeKeyMulti { copies, message_len, keys })
}

/// Bit `m_i` is encrypted under keys `(i−1)t+1 … it`.
pub fn ske_multi_enc<R: Rng + ?Sized>(key: &SkeKeyMulti, m: &[bool], rng: &mut R) -> Result<Vec<Ciphertext1>> {
    if m.len() != key.message_len {
        return Err(Error::WrongInputLength { expected: key.message_len, found: m.len() });
    }
    key.keys
        .chunks(key.copies)
        .zip(m)
        .flat_map(|(block, &bit)| block.iter().map(move |k| (k, bit)))
        .map(|(k, bit)| ske1_enc(k, bit, rng))
        .collect()
}

/// `m′_i = 0` iff all `t` sub-decryptions of block `i` return 0.
pub fn ske_multi_dec<R: Rng + ?Sized>(key: &SkeKeyMulti, cts: &[Ciphertext1], rng: &mut R) -> Result<Vec<bool>> {
    if cts.len() != key.keys.len() {
        return Err(Error::WrongInputLength { expected: key.keys.len(), found: cts.len() });
    }
    let bits: Vec<bool> = key.keys.iter().zip(cts).map(|(k, ct)| ske1_dec(k, ct, rng)).collect::<Result<_>>()?;
    Ok(bits.chunks(key.copies).map(|block| block.iter().any(|&b| b)).collect())
}
