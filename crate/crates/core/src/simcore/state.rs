use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::NORM_TOL;
use crate::error::{Error, Result};

/// Largest register this crate will allocate a statevector for.
pub const MAX_QUBITS: usize = 20;

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("a state needs at least one qubit".into()));
    }
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { requested: n, cap: MAX_QUBITS });
    }
    Ok(())
}

/// A normalized pure state on `num_qubits` qubits.
///
/// Qubit `q` is bit `q` of the amplitude index (little-endian). Bit-string
/// labels in this crate are written qubit 0 first, so the label `"10"` on
/// two qubits is index 1. When several registers share one vector, register
/// `i` of width `w` occupies qubits `i*w .. (i+1)*w`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// |0…0⟩
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amplitudes })
    }

    /// Basis state from a label written qubit 0 first, e.g. `"10"`.
    pub fn from_label(label: &str) -> Result<Self> {
        let mut index = 0usize;
        for (q, c) in label.chars().enumerate() {
            match c {
                '0' => {}
                '1' => index |= 1 << q,
                _ => return Err(Error::InvalidParameter(format!("bad basis label {label:?}"))),
            }
        }
        Self::basis(label.len(), index)
    }

    /// |+…+⟩ = H^{⊗n}|0…0⟩
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        let a = C64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(StateVector { num_qubits, amplitudes: vec![a; dim] })
    }

    /// Accepts amplitudes that are already normalized within `1e-10`.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        let norm_sqr = norm_sqr(&amplitudes);
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(StateVector { num_qubits, amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes onto the unit sphere.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        let n2 = norm_sqr(&amplitudes);
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
        let scale = n2.sqrt().recip();
        for a in &mut amplitudes {
            *a *= scale;
        }
        Ok(StateVector { num_qubits, amplitudes })
    }

    /// Wraps amplitudes produced by a unitary acting on a normalized state.
    pub(crate) fn from_unitary_image(num_qubits: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        StateVector { num_qubits, amplitudes }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub(crate) fn check_same_dim(&self, other: &StateVector) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                found: other.num_qubits,
            });
        }
        Ok(())
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_same_dim(other)?;
        Ok(inner_raw(&self.amplitudes, &other.amplitudes))
    }

    /// `self ⊗ other` with `self` in the low qubits (register 0).
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        check_qubits(n)?;
        let mut amplitudes = Vec::with_capacity(1 << n);
        for b in &other.amplitudes {
            for a in &self.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(StateVector { num_qubits: n, amplitudes })
    }

    /// `states[0] ⊗ states[1] ⊗ …`, register `i` holding `states[i]`.
    pub fn tensor_all(states: &[StateVector]) -> Result<StateVector> {
        let (first, rest) = states
            .split_first()
            .ok_or_else(|| Error::InvalidParameter("empty tensor product".into()))?;
        rest.iter().try_fold(first.clone(), |acc, s| acc.tensor(s))
    }

    /// Entry-wise closeness, ignoring nothing (global phase included).
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.num_qubits == other.num_qubits
            && self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// ‖self − other‖₂
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// H on every qubit, as an in-place fast Walsh–Hadamard transform.
    pub fn hadamard_all(&self) -> StateVector {
        let mut amps = self.amplitudes.clone();
        hadamard_all_raw(&mut amps);
        StateVector { num_qubits: self.num_qubits, amplitudes: amps }
    }

    /// Applies `f` to the amplitudes of register `register` (of `width` qubits)
    /// for every assignment of the remaining qubits. `f` must be linear and
    /// unitary on its slice for the result to stay normalized.
    pub fn map_register<F>(&self, register: usize, width: usize, mut f: F) -> Result<StateVector>
    where
        F: FnMut(&mut [C64]) -> Result<()>,
    {
        let offset = register_offset(self.num_qubits, register, width)?;
        let mut amps = self.amplitudes.clone();
        let chunk = 1usize << width;
        if offset == 0 {
            for block in amps.chunks_mut(chunk) {
                f(block)?;
            }
        } else {
            let low = 1usize << offset;
            let mut buf = vec![C64::new(0.0, 0.0); chunk];
            for rest in 0..(amps.len() / chunk) {
                let base = (rest & (low - 1)) | ((rest >> offset) << (offset + width));
                for (j, slot) in buf.iter_mut().enumerate() {
                    *slot = amps[base | (j << offset)];
                }
                f(&mut buf)?;
                for (j, v) in buf.iter().enumerate() {
                    amps[base | (j << offset)] = *v;
                }
            }
        }
        Ok(StateVector { num_qubits: self.num_qubits, amplitudes: amps })
    }
}

pub(crate) fn register_offset(num_qubits: usize, register: usize, width: usize) -> Result<usize> {
    if width == 0 || !num_qubits.is_multiple_of(width) {
        return Err(Error::DimensionMismatch { expected: width, found: num_qubits });
    }
    let count = num_qubits / width;
    if register >= count {
        return Err(Error::InvalidParameter(format!(
            "register {register} out of range ({count} registers of width {width})"
        )));
    }
    Ok(register * width)
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "amplitude count {len} is not 2^n with n >= 1"
        )));
    }
    let n = len.trailing_zeros() as usize;
    check_qubits(n)?;
    Ok(n)
}

pub(crate) fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

pub(crate) fn inner_raw(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn hadamard_all_raw(amps: &mut [C64]) {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut half = 1;
    while half < amps.len() {
        for block in amps.chunks_mut(half * 2) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (x + y) * scale;
                *b = (x - y) * scale;
            }
        }
        half *= 2;
    }
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    num_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(deserializer)?;
        let amps = repr.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        let state = StateVector::from_amplitudes(amps).map_err(serde::de::Error::custom)?;
        if state.num_qubits != repr.num_qubits {
            return Err(serde::de::Error::custom("num_qubits does not match amplitude count"));
        }
        Ok(state)
    }
}
