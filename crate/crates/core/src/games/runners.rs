use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::nrprfsg::{keygen, Oracle, OracleMode};
use crate::qga::{Candidate, QgaInstance};
use crate::seed::Rng as StreamRng;
use crate::simcore::{
    measure_register_projector, projection_prob, projection_sample, sample_haar_state,
    sample_haar_unitary, StateVector, DENSE_UNITARY_CAP, MAX_QUBITS,
};

use super::adversaries::*;
use super::distributions::{gen_distribution, DistParams, DistributionId};
use super::{run_trials, GameResult, Side, TrialOutcome};

/// Where the challenger's |s⟩ comes from in the UP and UC games.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateSource {
    /// `S(1^λ)`
    #[default]
    Sampler,
    /// Haar-random |s⟩.
    Haar,
}

fn challenger_state(qga: &QgaInstance, source: StateSource, rng: &mut StreamRng) -> Result<StateVector> {
    match source {
        StateSource::Sampler => qga.sample_s().expand(),
        StateSource::Haar => sample_haar_state(qga.num_qubits, rng),
    }
}

fn check_width(state: &StateVector, expected: usize) -> Result<()> {
    if state.num_qubits() != expected {
        return Err(Error::MalformedOutput(format!(
            "state on {} qubits, expected {expected}",
            state.num_qubits()
        )));
    }
    Ok(())
}

fn sided(rng: &mut StreamRng, f: impl FnOnce(Side, &mut StreamRng) -> Result<bool>) -> Result<TrialOutcome> {
    let side = if rng.random_bool(0.5) { Side::Right } else { Side::Left };
    Ok(TrialOutcome::sided(side, f(side, rng)?))
}

/// Success with probability `|⟨s|(g′)†g|s⟩|²`.
pub fn run_ow_game(qga: &QgaInstance, adversary: &dyn OwAdversary, t: usize, trials: usize, seed: u64) -> Result<GameResult> {
    if t == 0 {
        return Err(invalid("t must be at least 1"));
    }
    let n = qga.num_qubits;
    let outcomes = run_trials(seed, "ow", trials, |rng| {
        let s = qga.sample_s().expand()?;
        let g = qga.sample_g(rng)?;
        let gs = g.apply(&s)?;
        let ch = OwChallenge {
            s_copies: vec![s.clone(); t],
            gs_copies: vec![gs.clone(); t],
            trapdoor: Trapdoor { g, s: s.clone() },
        };
        let guess = adversary.attack(&ch, rng)?;
        if guess.num_qubits() != n {
            return Err(Error::MalformedOutput(format!("[g′] acts on {} qubits, expected {n}", guess.num_qubits())));
        }
        Ok(TrialOutcome::win(projection_sample(&guess.apply(&s)?, &gs, rng)?.is_hit()))
    })?;
    GameResult::from_wins(seed, outcomes)
}

/// The adversary sees `|s⟩^{⊗t}`; the challenger projects onto g|s⟩.
pub fn run_up_game(
    qga: &QgaInstance,
    adversary: &dyn UpAdversary,
    t: usize,
    source: StateSource,
    trials: usize,
    seed: u64,
) -> Result<GameResult> {
    let n = qga.num_qubits;
    let outcomes = run_trials(seed, "up", trials, |rng| {
        let s = challenger_state(qga, source, rng)?;
        let g = qga.sample_g(rng)?;
        let ch = UpChallenge { s_copies: vec![s.clone(); t], trapdoor: Trapdoor { g, s } };
        let rho = adversary.attack(&ch, rng)?;
        check_width(&rho, n)?;
        Ok(TrialOutcome::win(projection_sample(&ch.trapdoor.target()?, &rho, rng)?.is_hit()))
    })?;
    GameResult::from_wins(seed, outcomes)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UcParams {
    pub t0: usize,
    pub t: usize,
    pub t_prime: usize,
    #[serde(default)]
    pub source: StateSource,
}

impl UcParams {
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if self.t_prime <= self.t {
            return Err(invalid(format!("t′ = {} must exceed t = {}", self.t_prime, self.t)));
        }
        check_register_budget(self.t_prime, num_qubits)
    }
}

fn check_register_budget(t_prime: usize, num_qubits: usize) -> Result<()> {
    let total = t_prime.saturating_mul(num_qubits);
    if total > MAX_QUBITS {
        return Err(Error::TooManyQubits { requested: total, cap: MAX_QUBITS });
    }
    Ok(())
}

/// Projects registers `0, 1, …, t′−1` in turn onto `target`.
fn count_hits(xi: &StateVector, target: &StateVector, t_prime: usize, rng: &mut StreamRng) -> Result<usize> {
    let width = target.num_qubits();
    check_width(xi, t_prime * width)?;
    let mut state = xi.clone();
    let mut hits = 0;
    for i in 0..t_prime {
        let (outcome, next) = measure_register_projector(&state, i, width, target, rng)?;
        hits += outcome.is_hit() as usize;
        state = next;
    }
    Ok(hits)
}

/// Success iff at least `t + 1` of the `t′` projections onto g|s⟩ pass.
pub fn run_uc_game(qga: &QgaInstance, adversary: &dyn UcAdversary, params: UcParams, trials: usize, seed: u64) -> Result<GameResult> {
    params.validate(qga.num_qubits)?;
    let outcomes = run_trials(seed, "uc", trials, |rng| {
        let s = challenger_state(qga, params.source, rng)?;
        let g = qga.sample_g(rng)?;
        let target = g.apply(&s)?;
        let ch = UcChallenge {
            s_copies: vec![s.clone(); params.t0],
            gs_copies: vec![target.clone(); params.t],
            t_prime: params.t_prime,
            trapdoor: Trapdoor { g, s },
        };
        let xi = adversary.attack(&ch, rng)?;
        let hits = count_hits(&xi, &target, params.t_prime, rng)?;
        Ok(TrialOutcome { success: hits > params.t, hits: Some(hits), ..Default::default() })
    })?;
    GameResult::from_wins(seed, outcomes)
}

/// A balanced hidden coin picks `left` or `right` each trial; the estimate
/// is `|Pr[1 | left] − Pr[1 | right]|`.
pub fn run_distinguishing_game(
    pair: (DistributionId, DistributionId),
    params: &DistParams,
    distinguisher: &dyn Distinguisher,
    trials: usize,
    seed: u64,
) -> Result<GameResult> {
    let (left, right) = pair;
    if left.shape(params) != right.shape(params) {
        return Err(Error::Precondition(format!("{left} and {right} have different shapes")));
    }
    let outcomes = run_trials(seed, "distinguish", trials, |rng| {
        sided(rng, |side, rng| {
            let id = if side == Side::Left { left } else { right };
            let samples = gen_distribution(id, params, rng)?;
            distinguisher.guess(&samples, rng)
        })
    })?;
    GameResult::from_sides(seed, outcomes)
}

fn check_ell(ell: usize) -> Result<()> {
    if ell == 0 || ell > 63 {
        return Err(invalid(format!("ℓ = {ell} out of range")));
    }
    Ok(())
}

fn fresh_oracle(qga: &QgaInstance, ell: usize, mode: OracleMode, rng: &mut StreamRng) -> Result<Oracle> {
    let key = keygen(qga, ell, rng)?;
    Oracle::open(mode, &key, qga, StreamRng::from_rng(rng))
}

/// Distinguishing game between two oracle modes, e.g. Real vs Ideal.
pub fn run_prfsg_game(
    qga: &QgaInstance,
    ell: usize,
    modes: (OracleMode, OracleMode),
    distinguisher: &dyn OracleDistinguisher,
    trials: usize,
    seed: u64,
) -> Result<GameResult> {
    check_ell(ell)?;
    let outcomes = run_trials(seed, "prfsg", trials, |rng| {
        sided(rng, |side, rng| {
            let mode = if side == Side::Left { modes.0 } else { modes.1 };
            let mut oracle = fresh_oracle(qga, ell, mode, rng)?;
            distinguisher.guess(&mut oracle, rng)
        })
    })?;
    GameResult::from_sides(seed, outcomes)
}

fn check_target(x: &[bool], ell: usize) -> Result<()> {
    if x.len() != ell {
        return Err(Error::MalformedOutput(format!("x* has length {}, expected {ell}", x.len())));
    }
    Ok(())
}

/// The forgery `(x*, ρ)` loses outright when `x*` was queried; otherwise
/// `ρ` is projected onto the oracle's answer for `x*`.
pub fn run_upsg_game(
    qga: &QgaInstance,
    ell: usize,
    mode: OracleMode,
    adversary: &dyn UpsgAdversary,
    trials: usize,
    seed: u64,
) -> Result<GameResult> {
    check_ell(ell)?;
    let outcomes = run_trials(seed, "upsg", trials, |rng| {
        let mut oracle = fresh_oracle(qga, ell, mode, rng)?;
        let forgery = adversary.forge(&mut oracle, rng)?;
        check_target(&forgery.x, ell)?;
        check_width(&forgery.state, qga.num_qubits)?;
        if oracle.was_queried(&forgery.x) {
            return Ok(TrialOutcome::win(false));
        }
        let answer = oracle.challenge(&forgery.x)?;
        Ok(TrialOutcome::win(projection_sample(&answer, &forgery.state, rng)?.is_hit()))
    })?;
    GameResult::from_wins(seed, outcomes)
}

/// After choosing a fresh `x*` the adversary receives `t` copies of its
/// answer and must pass at least `t + 1` of `t′` projections.
#[allow(clippy::too_many_arguments)]
pub fn run_ucfsg_game(
    qga: &QgaInstance,
    ell: usize,
    mode: OracleMode,
    adversary: &dyn UcfsgAdversary,
    t: usize,
    t_prime: usize,
    trials: usize,
    seed: u64,
) -> Result<GameResult> {
    check_ell(ell)?;
    if t_prime <= t {
        return Err(invalid(format!("t′ = {t_prime} must exceed t = {t}")));
    }
    check_register_budget(t_prime, qga.num_qubits)?;
    let outcomes = run_trials(seed, "ucfsg", trials, |rng| {
        let mut oracle = fresh_oracle(qga, ell, mode, rng)?;
        let x = adversary.choose(&mut oracle, rng)?;
        check_target(&x, ell)?;
        if oracle.was_queried(&x) {
            return Ok(TrialOutcome { success: false, hits: Some(0), ..Default::default() });
        }
        let answer = oracle.challenge(&x)?;
        let xi = adversary.respond(&vec![answer.clone(); t], t_prime, rng)?;
        let hits = count_hits(&xi, &answer, t_prime, rng)?;
        Ok(TrialOutcome { success: hits > t, hits: Some(hits), ..Default::default() })
    })?;
    GameResult::from_wins(seed, outcomes)
}

/// IQP elements fix H^{⊗λ}|0^λ⟩, so querying the unknown unitary on that
/// state and projecting back separates an IQP element (left, always a hit)
/// from a Haar unitary (right, hit rate 2^{-λ}).
pub fn attack_iqp_fixed_point(qga: &QgaInstance, trials: usize, seed: u64) -> Result<GameResult> {
    if !matches!(qga.candidate, Candidate::IqpDiagonal { .. } | Candidate::IqpSparse { .. }) {
        return Err(invalid("the fixed-point attack needs an IQP candidate"));
    }
    let n = qga.num_qubits;
    if n > DENSE_UNITARY_CAP {
        return Err(Error::TooManyQubits { requested: n, cap: DENSE_UNITARY_CAP });
    }
    let plus = StateVector::uniform(n)?;
    let outcomes = run_trials(seed, "attack-iqp", trials, |rng| {
        sided(rng, |side, rng| {
            let reply = match side {
                Side::Left => qga.sample_g(rng)?.apply(&plus)?,
                Side::Right => {
                    let u = sample_haar_unitary(n, rng)?;
                    StateVector::normalized(u.apply(plus.amplitudes())?)?
                }
            };
            Ok(projection_sample(&plus, &reply, rng)?.is_hit())
        })
    })?;
    GameResult::from_sides(seed, outcomes)
}

/// `|⟨+^λ|g|+^λ⟩|²` for one sampled IQP element; exactly the quantity the
/// attack thresholds on.
pub fn iqp_fixed_point_overlap(qga: &QgaInstance, rng: &mut StreamRng) -> Result<f64> {
    let plus = StateVector::uniform(qga.num_qubits)?;
    projection_prob(&plus, &qga.sample_g(rng)?.apply(&plus)?)
}
