//! Naor–Reingold-style pseudorandom function-like state generator.
//!
//! `StateGen(k, x) = g_ℓ^{x[ℓ]} ⋯ g_1^{x[1]} g_0 |s_0⟩`: `g_0` is applied
//! first, then `g_i` for each set bit in ascending order. The oracle family
//! (Real, Hybrid, Ideal and the interpolating `Game(j)`) answers classical
//! queries only.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::qga::{QgaDescription, QgaInstance, StateDescription};
use crate::seed::Rng as StreamRng;
use crate::simcore::{projection_prob, projection_sample, sample_haar_state, StateVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KeyRepr")]
pub struct PrfsgKey {
    lambda: usize,
    ell: usize,
    base_state: StateDescription,
    group_elements: Vec<QgaDescription>,
}

#[derive(Deserialize)]
struct KeyRepr {
    lambda: usize,
    ell: usize,
    base_state: StateDescription,
    group_elements: Vec<QgaDescription>,
}

impl TryFrom<KeyRepr> for PrfsgKey {
    type Error = Error;
    fn try_from(r: KeyRepr) -> Result<Self> {
        PrfsgKey::new(r.base_state, r.group_elements)
            .and_then(|k| if k.lambda == r.lambda && k.ell == r.ell { Ok(k) } else { Err(invalid("lambda/ell do not match key body")) })
    }
}

impl PrfsgKey {
    /// `group_elements[i]` is `g_i`; there must be at least two.
    pub fn new(base_state: StateDescription, group_elements: Vec<QgaDescription>) -> Result<Self> {
        if group_elements.len() < 2 {
            return Err(invalid("a key needs g_0 and at least one g_i (ℓ ≥ 1)"));
        }
        let lambda = base_state.num_qubits();
        if let Some(g) = group_elements.iter().find(|g| g.num_qubits() != lambda) {
            return Err(Error::DimensionMismatch { expected: lambda, found: g.num_qubits() });
        }
        Ok(PrfsgKey { lambda, ell: group_elements.len() - 1, base_state, group_elements })
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }
    pub fn ell(&self) -> usize {
        self.ell
    }
    pub fn base_state(&self) -> &StateDescription {
        &self.base_state
    }
    pub fn group_elements(&self) -> &[QgaDescription] {
        &self.group_elements
    }

    fn check_input(&self, x: &[bool]) -> Result<()> {
        if x.len() != self.ell {
            return Err(Error::WrongInputLength { expected: self.ell, found: x.len() });
        }
        Ok(())
    }

    /// Applies `g_{from+1} … g_ℓ` selected by `x` to `state`.
    fn apply_suffix(&self, from: usize, x: &[bool], mut state: StateVector) -> Result<StateVector> {
        for i in (from + 1)..=self.ell {
            if x[i - 1] {
                state = self.group_elements[i].apply(&state)?;
            }
        }
        Ok(state)
    }
}

/// Samples `g_0, …, g_ℓ ← G` in index order, then `|s_0⟩ ← S`.
pub fn keygen<R: Rng + ?Sized>(qga: &QgaInstance, ell: usize, rng: &mut R) -> Result<PrfsgKey> {
    if ell == 0 {
        return Err(invalid("ℓ must be at least 1"));
    }
    let group_elements = (0..=ell).map(|_| qga.sample_g(rng)).collect::<Result<Vec<_>>>()?;
    PrfsgKey::new(qga.sample_s(), group_elements)
}

pub fn state_gen(key: &PrfsgKey, x: &[bool]) -> Result<StateVector> {
    key.check_input(x)?;
    let start = key.group_elements[0].apply(&key.base_state.expand()?)?;
    key.apply_suffix(0, x, start)
}

/// Parses `"0110"` as `x[1..=4]`.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(invalid(format!("bad bit string {s:?}"))),
        })
        .collect()
}

pub fn format_bits(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// All `2^ℓ` inputs in lexicographic order of their labels.
pub fn all_inputs(ell: usize) -> Vec<Vec<bool>> {
    (0..1usize << ell)
        .map(|v| (0..ell).map(|i| (v >> (ell - 1 - i)) & 1 == 1).collect())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    Real,
    Hybrid,
    Ideal,
    /// Hybrid game `j`: answers share randomness on the first `j` bits.
    Game(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub x: String,
    pub answer_ref: usize,
}

/// Stateful classical-query oracle. Memoized per input (Hybrid, Ideal),
/// per `j`-bit prefix (`Game(j)`), or recomputed (Real).
pub struct Oracle {
    mode: OracleMode,
    key: PrfsgKey,
    qga: QgaInstance,
    base: StateVector,
    rng: StreamRng,
    memo_index: HashMap<Vec<bool>, usize>,
    memo_states: Vec<StateVector>,
    queried: Vec<Vec<bool>>,
    transcript: Vec<TranscriptEntry>,
}

impl Oracle {
    /// Real answers with `key`; Hybrid and `Game(j)` draw fresh elements
    /// from `qga` using `rng`; Ideal draws Haar states from `rng`. `Game(j)`
    /// takes `g_0` (for `j = 0`) and `g_{j+1}, …, g_ℓ` from `key`.
    pub fn open(mode: OracleMode, key: &PrfsgKey, qga: &QgaInstance, rng: StreamRng) -> Result<Oracle> {
        if qga.num_qubits != key.lambda {
            return Err(Error::DimensionMismatch { expected: key.lambda, found: qga.num_qubits });
        }
        if let OracleMode::Game(j) = mode {
            if j > key.ell {
                return Err(invalid(format!("Game_{j} needs j ≤ ℓ = {}", key.ell)));
            }
        }
        Ok(Oracle {
            mode,
            key: key.clone(),
            qga: *qga,
            base: key.base_state.expand()?,
            rng,
            memo_index: HashMap::new(),
            memo_states: Vec::new(),
            queried: Vec::new(),
            transcript: Vec::new(),
        })
    }

    pub fn mode(&self) -> OracleMode {
        self.mode
    }
    pub fn lambda(&self) -> usize {
        self.key.lambda
    }
    pub fn ell(&self) -> usize {
        self.key.ell
    }

    /// Adversary query.
    pub fn query(&mut self, x: &[bool]) -> Result<StateVector> {
        let answer = self.answer(x)?;
        self.queried.push(x.to_vec());
        Ok(answer)
    }

    /// Challenger-side evaluation (the answer for a forgery target). Shares
    /// the memo but is not recorded as an adversary query.
    pub fn challenge(&mut self, x: &[bool]) -> Result<StateVector> {
        self.answer(x)
    }

    pub fn was_queried(&self, x: &[bool]) -> bool {
        self.queried.iter().any(|q| q == x)
    }

    pub fn query_count(&self) -> usize {
        self.queried.len()
    }

    pub fn memo_len(&self) -> usize {
        self.memo_index.len()
    }

    pub fn memo_keys(&self) -> Vec<String> {
        let mut keys: Vec<String> = self.memo_index.keys().map(|k| format_bits(k)).collect();
        keys.sort();
        keys
    }

    pub fn transcript(&self) -> &[TranscriptEntry] {
        &self.transcript
    }

    fn memo_key(&self, x: &[bool]) -> Vec<bool> {
        match self.mode {
            OracleMode::Game(j) => x[..j].to_vec(),
            _ => x.to_vec(),
        }
    }

    fn answer(&mut self, x: &[bool]) -> Result<StateVector> {
        self.key.check_input(x)?;
        let mk = self.memo_key(x);
        let known = self.memo_index.get(&mk).copied();
        let slot = match known {
            Some(slot) => slot,
            None => {
                let stored = match self.mode {
                    // Real keeps no state; the slot only numbers distinct inputs.
                    OracleMode::Real => None,
                    OracleMode::Hybrid => Some(self.qga.sample_g(&mut self.rng)?.apply(&self.base)?),
                    OracleMode::Ideal => Some(sample_haar_state(self.key.lambda, &mut self.rng)?),
                    OracleMode::Game(0) => Some(self.key.group_elements[0].apply(&self.base)?),
                    OracleMode::Game(_) => Some(self.qga.sample_g(&mut self.rng)?.apply(&self.base)?),
                };
                let slot = self.memo_index.len();
                self.memo_index.insert(mk, slot);
                if let Some(s) = stored {
                    self.memo_states.push(s);
                }
                slot
            }
        };
        self.transcript.push(TranscriptEntry { x: format_bits(x), answer_ref: slot });
        match self.mode {
            OracleMode::Real => state_gen(&self.key, x),
            OracleMode::Hybrid | OracleMode::Ideal => Ok(self.memo_states[slot].clone()),
            OracleMode::Game(j) => self.key.apply_suffix(j, x, self.memo_states[slot].clone()),
        }
    }
}

pub fn open_oracle(mode: OracleMode, key: &PrfsgKey, qga: &QgaInstance, rng: StreamRng) -> Result<Oracle> {
    Oracle::open(mode, key, qga, rng)
}

pub fn query_oracle(oracle: &mut Oracle, x: &[bool]) -> Result<StateVector> {
    oracle.query(x)
}

/// Unclonable MAC tag: `StateGen(k, x)`.
pub fn mac_tag(key: &PrfsgKey, x: &[bool]) -> Result<StateVector> {
    state_gen(key, x)
}

pub fn mac_accept_prob(key: &PrfsgKey, x: &[bool], candidate: &StateVector) -> Result<f64> {
    projection_prob(&mac_tag(key, x)?, candidate)
}

/// Projects `candidate` onto the tag for `x`.
pub fn mac_verify<R: Rng + ?Sized>(
    key: &PrfsgKey,
    x: &[bool],
    candidate: &StateVector,
    rng: &mut R,
) -> Result<bool> {
    Ok(projection_sample(&mac_tag(key, x)?, candidate, rng)?.is_hit())
}
