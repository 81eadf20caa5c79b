//! Overlap-based tests. Probabilities are computed analytically from
//! amplitudes; the `*_sample` functions draw a single Bernoulli outcome.

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::state::{register_offset, StateVector};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SwapOutcome {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionOutcome {
    Hit,
    Miss,
}

impl ProjectionOutcome {
    pub fn is_hit(self) -> bool {
        self == ProjectionOutcome::Hit
    }
}

pub(crate) fn bernoulli<R: Rng + ?Sized>(p: f64, rng: &mut R) -> bool {
    rng.random::<f64>() < p.clamp(0.0, 1.0)
}

pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<C64> {
    a.inner(b)
}

/// |⟨target|candidate⟩|², divided by the two norms so that bit-identical
/// inputs give exactly 1.
pub fn projection_prob(target: &StateVector, candidate: &StateVector) -> Result<f64> {
    let ip = target.inner(candidate)?;
    let p = ip.norm_sqr() / (target.norm_sqr() * candidate.norm_sqr());
    Ok(p.clamp(0.0, 1.0))
}

pub fn projection_sample<R: Rng + ?Sized>(
    target: &StateVector,
    candidate: &StateVector,
    rng: &mut R,
) -> Result<ProjectionOutcome> {
    let p = projection_prob(target, candidate)?;
    Ok(if bernoulli(p, rng) { ProjectionOutcome::Hit } else { ProjectionOutcome::Miss })
}

/// (1 + |⟨a|b⟩|²) / 2
pub fn swap_test_accept_prob(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok((1.0 + projection_prob(a, b)?) / 2.0)
}

pub fn swap_test_sample<R: Rng + ?Sized>(
    a: &StateVector,
    b: &StateVector,
    rng: &mut R,
) -> Result<SwapOutcome> {
    let p = swap_test_accept_prob(a, b)?;
    Ok(if bernoulli(p, rng) { SwapOutcome::Pass } else { SwapOutcome::Fail })
}

/// SWAP-test acceptance on the two halves of a (possibly entangled) joint
/// state: (1 + ⟨Φ|SWAP|Φ⟩) / 2.
pub fn swap_test_accept_prob_joint(joint: &StateVector) -> Result<f64> {
    let n = joint.num_qubits();
    if !n.is_multiple_of(2) {
        return Err(Error::DimensionMismatch { expected: n + 1, found: n });
    }
    let w = n / 2;
    let mask = (1usize << w) - 1;
    let amps = joint.amplitudes();
    let overlap: C64 = amps
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let swapped = ((i & mask) << w) | (i >> w);
            a.conj() * amps[swapped]
        })
        .sum();
    Ok(((1.0 + overlap.re / joint.norm_sqr()) / 2.0).clamp(0.5, 1.0))
}

/// Projective measurement {P, I − P} with P = |target⟩⟨target| on register
/// `register_index` of a joint state built from registers of
/// `register_width` qubits. Returns the outcome and the renormalized
/// post-measurement state.
pub fn measure_register_projector<R: Rng + ?Sized>(
    joint: &StateVector,
    register_index: usize,
    register_width: usize,
    target: &StateVector,
    rng: &mut R,
) -> Result<(ProjectionOutcome, StateVector)> {
    let probe = register_hit_probability(joint, register_index, register_width, target)?;
    let outcome =
        if bernoulli(probe.hit_prob, rng) { ProjectionOutcome::Hit } else { ProjectionOutcome::Miss };
    let collapsed = collapse(joint, register_index, register_width, target, outcome, &probe)?;
    Ok((outcome, collapsed))
}

/// The deterministic half of [`measure_register_projector`]: the probability
/// of `outcome` and the renormalized branch it leaves behind.
pub fn project_register(
    joint: &StateVector,
    register_index: usize,
    register_width: usize,
    target: &StateVector,
    outcome: ProjectionOutcome,
) -> Result<(f64, StateVector)> {
    let probe = register_hit_probability(joint, register_index, register_width, target)?;
    let p = match outcome {
        ProjectionOutcome::Hit => probe.hit_prob,
        ProjectionOutcome::Miss => 1.0 - probe.hit_prob,
    };
    let collapsed = collapse(joint, register_index, register_width, target, outcome, &probe)?;
    Ok((p, collapsed))
}

pub(crate) struct RegisterProbe {
    pub hit_prob: f64,
    /// ⟨target|_i |Φ⟩ indexed by the assignment of the other registers.
    coefficients: Vec<C64>,
}

pub(crate) fn register_hit_probability(
    joint: &StateVector,
    register_index: usize,
    register_width: usize,
    target: &StateVector,
) -> Result<RegisterProbe> {
    if target.num_qubits() != register_width {
        return Err(Error::DimensionMismatch { expected: register_width, found: target.num_qubits() });
    }
    let offset = register_offset(joint.num_qubits(), register_index, register_width)?;
    let chunk = 1usize << register_width;
    let low = 1usize << offset;
    let amps = joint.amplitudes();
    let t = target.amplitudes();
    let t_norm = target.norm_sqr().sqrt();
    let coefficients: Vec<C64> = (0..amps.len() / chunk)
        .map(|rest| {
            let base = (rest & (low - 1)) | ((rest >> offset) << (offset + register_width));
            (0..chunk).map(|j| t[j].conj() * amps[base | (j << offset)]).sum::<C64>() / t_norm
        })
        .collect();
    let hit: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    Ok(RegisterProbe { hit_prob: (hit / joint.norm_sqr()).clamp(0.0, 1.0), coefficients })
}

fn collapse(
    joint: &StateVector,
    register_index: usize,
    register_width: usize,
    target: &StateVector,
    outcome: ProjectionOutcome,
    probe: &RegisterProbe,
) -> Result<StateVector> {
    let offset = register_index * register_width;
    let chunk = 1usize << register_width;
    let low = 1usize << offset;
    let t_norm = target.norm_sqr().sqrt();
    let t: Vec<C64> = target.amplitudes().iter().map(|a| a / t_norm).collect();
    let mut hit_part = vec![C64::new(0.0, 0.0); joint.dim()];
    for (rest, c) in probe.coefficients.iter().enumerate() {
        let base = (rest & (low - 1)) | ((rest >> offset) << (offset + register_width));
        for (j, tj) in t.iter().enumerate().take(chunk) {
            hit_part[base | (j << offset)] = c * tj;
        }
    }
    let branch: Vec<C64> = match outcome {
        ProjectionOutcome::Hit => hit_part,
        ProjectionOutcome::Miss => {
            joint.amplitudes().iter().zip(&hit_part).map(|(a, h)| a - h).collect()
        }
    };
    let n2: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
    if n2 < 1e-24 {
        return Err(Error::ImpossibleBranch);
    }
    StateVector::normalized(branch)
}
