//! Adversary interfaces and the built-in baselines.
//!
//! Challenges carry a `trapdoor` with the challenger's secret. Only the
//! baselines named `Omniscient*` read it; they exist to pin the top of each
//! success scale.

use crate::error::{Error, Result};
use crate::nrprfsg::Oracle;
use crate::qga::QgaDescription;
use crate::seed::Rng as StreamRng;
use crate::simcore::{projection_sample, sample_haar_state, DenseMatrix, StateVector};

use super::SampleSet;

/// What the one-way, unpredictability and unclonability challengers hold.
#[derive(Clone, Debug)]
pub struct Trapdoor {
    pub g: QgaDescription,
    pub s: StateVector,
}

impl Trapdoor {
    pub fn target(&self) -> Result<StateVector> {
        self.g.apply(&self.s)
    }
}

/// `|s⟩^{⊗t}` and `(g|s⟩)^{⊗t}`.
#[derive(Clone, Debug)]
pub struct OwChallenge {
    pub s_copies: Vec<StateVector>,
    pub gs_copies: Vec<StateVector>,
    pub trapdoor: Trapdoor,
}

/// `|s⟩^{⊗t}`.
#[derive(Clone, Debug)]
pub struct UpChallenge {
    pub s_copies: Vec<StateVector>,
    pub trapdoor: Trapdoor,
}

/// `|s⟩^{⊗t0}`, `(g|s⟩)^{⊗t}`, and the number `t′` of registers to return.
#[derive(Clone, Debug)]
pub struct UcChallenge {
    pub s_copies: Vec<StateVector>,
    pub gs_copies: Vec<StateVector>,
    pub t_prime: usize,
    pub trapdoor: Trapdoor,
}

pub trait OwAdversary: Sync {
    fn attack(&self, challenge: &OwChallenge, rng: &mut StreamRng) -> Result<QgaDescription>;
}

pub trait UpAdversary: Sync {
    fn attack(&self, challenge: &UpChallenge, rng: &mut StreamRng) -> Result<StateVector>;
}

/// Returns a joint state on `t′` registers of λ qubits each.
pub trait UcAdversary: Sync {
    fn attack(&self, challenge: &UcChallenge, rng: &mut StreamRng) -> Result<StateVector>;
}

pub trait Distinguisher: Sync {
    fn guess(&self, samples: &SampleSet, rng: &mut StreamRng) -> Result<bool>;
}

/// Distinguishes oracles through classical queries.
pub trait OracleDistinguisher: Sync {
    fn guess(&self, oracle: &mut Oracle, rng: &mut StreamRng) -> Result<bool>;
}

pub struct Forgery {
    pub x: Vec<bool>,
    pub state: StateVector,
}

pub trait UpsgAdversary: Sync {
    fn forge(&self, oracle: &mut Oracle, rng: &mut StreamRng) -> Result<Forgery>;
}

/// Two phases: pick a target after querying, then turn `t` copies of its
/// answer into `t′` registers.
pub trait UcfsgAdversary: Sync {
    fn choose(&self, oracle: &mut Oracle, rng: &mut StreamRng) -> Result<Vec<bool>>;
    fn respond(&self, copies: &[StateVector], t_prime: usize, rng: &mut StreamRng) -> Result<StateVector>;
}

/// Any unit vector orthogonal to `v`.
pub fn orthogonal_to(v: &StateVector) -> Result<StateVector> {
    if v.dim() < 2 {
        return Err(Error::Precondition("no orthogonal complement".into()));
    }
    let basis = DenseMatrix::with_first_column(v.amplitudes())?;
    StateVector::normalized(basis.column(1))
}

fn first(copies: &[StateVector], what: &str) -> Result<StateVector> {
    copies.first().cloned().ok_or_else(|| Error::Precondition(format!("needs at least one copy of {what}")))
}

/// `copies ⊗ pad^{⊗(t′ − t)}`.
fn pad_registers(copies: &[StateVector], t_prime: usize, mut pad: impl FnMut() -> Result<StateVector>) -> Result<StateVector> {
    if t_prime < copies.len() {
        return Err(Error::Precondition(format!("t′ = {t_prime} < {} copies", copies.len())));
    }
    let mut registers = copies.to_vec();
    for _ in copies.len()..t_prime {
        registers.push(pad()?);
    }
    StateVector::tensor_all(&registers)
}

/// Guesses g′ = I.
pub struct IdentityGuess;

impl OwAdversary for IdentityGuess {
    fn attack(&self, ch: &OwChallenge, _: &mut StreamRng) -> Result<QgaDescription> {
        Ok(QgaDescription::identity(ch.trapdoor.g.num_qubits()))
    }
}

pub struct OmniscientOw;

impl OwAdversary for OmniscientOw {
    fn attack(&self, ch: &OwChallenge, _: &mut StreamRng) -> Result<QgaDescription> {
        Ok(ch.trapdoor.g.clone())
    }
}

/// A dense g′ with g′|s⟩ ⊥ g|s⟩, built from the copies alone.
pub struct OrthogonalGuess;

impl OwAdversary for OrthogonalGuess {
    fn attack(&self, ch: &OwChallenge, _: &mut StreamRng) -> Result<QgaDescription> {
        let s = first(&ch.s_copies, "|s⟩")?;
        let gs = first(&ch.gs_copies, "g|s⟩")?;
        let perp = orthogonal_to(&gs)?;
        let to_perp = DenseMatrix::with_first_column(perp.amplitudes())?;
        let from_s = DenseMatrix::with_first_column(s.amplitudes())?.adjoint();
        QgaDescription::from_unitary(to_perp.mul(&from_s)?)
    }
}

/// Outputs |s⟩ unchanged.
pub struct CopyInput;

impl UpAdversary for CopyInput {
    fn attack(&self, ch: &UpChallenge, _: &mut StreamRng) -> Result<StateVector> {
        first(&ch.s_copies, "|s⟩")
    }
}

pub struct OmniscientUp;

impl UpAdversary for OmniscientUp {
    fn attack(&self, ch: &UpChallenge, _: &mut StreamRng) -> Result<StateVector> {
        ch.trapdoor.target()
    }
}

/// Ignores its input and outputs a fixed state.
pub struct FixedState(pub StateVector);

impl UpAdversary for FixedState {
    fn attack(&self, _: &UpChallenge, _: &mut StreamRng) -> Result<StateVector> {
        Ok(self.0.clone())
    }
}

/// Echoes the `t` copies and pads with a state orthogonal to them.
pub struct EchoWithJunk;

impl UcAdversary for EchoWithJunk {
    fn attack(&self, ch: &UcChallenge, _: &mut StreamRng) -> Result<StateVector> {
        let junk = orthogonal_to(&first(&ch.gs_copies, "g|s⟩")?)?;
        pad_registers(&ch.gs_copies, ch.t_prime, || Ok(junk.clone()))
    }
}

pub struct OmniscientCloner;

impl UcAdversary for OmniscientCloner {
    fn attack(&self, ch: &UcChallenge, _: &mut StreamRng) -> Result<StateVector> {
        let target = ch.trapdoor.target()?;
        pad_registers(&[], ch.t_prime, || Ok(target.clone()))
    }
}

/// Echoes the `t` copies and pads with fresh Haar states.
pub struct HaarPadding;

impl UcAdversary for HaarPadding {
    fn attack(&self, ch: &UcChallenge, rng: &mut StreamRng) -> Result<StateVector> {
        let n = ch.trapdoor.s.num_qubits();
        pad_registers(&ch.gs_copies, ch.t_prime, || sample_haar_state(n, rng))
    }
}

/// Ignores the samples.
pub struct RandomGuess;

impl Distinguisher for RandomGuess {
    fn guess(&self, _: &SampleSet, rng: &mut StreamRng) -> Result<bool> {
        Ok(rand::Rng::random_bool(rng, 0.5))
    }
}

/// Projects one component of one copy onto `target`; outputs 1 on a hit.
pub struct ProjectComponentOnto {
    pub block: usize,
    pub copy: usize,
    pub component: usize,
    pub target: StateVector,
}

impl Distinguisher for ProjectComponentOnto {
    fn guess(&self, samples: &SampleSet, rng: &mut StreamRng) -> Result<bool> {
        let state = samples
            .blocks
            .get(self.block)
            .and_then(|b| b.get(self.copy))
            .and_then(|c| c.get(self.component))
            .ok_or_else(|| Error::Precondition("component index outside the sample".into()))?;
        Ok(projection_sample(&self.target, state, rng)?.is_hit())
    }
}

/// Queries `x` twice and projects one answer onto the other.
pub struct ConsistencyDistinguisher {
    pub x: Vec<bool>,
}

impl OracleDistinguisher for ConsistencyDistinguisher {
    fn guess(&self, oracle: &mut Oracle, rng: &mut StreamRng) -> Result<bool> {
        let a = oracle.query(&self.x)?;
        let b = oracle.query(&self.x)?;
        Ok(projection_sample(&a, &b, rng)?.is_hit())
    }
}

/// Queries `query` and submits its answer as the forgery for `target`.
pub struct Replay {
    pub query: Vec<bool>,
    pub target: Vec<bool>,
}

impl UpsgAdversary for Replay {
    fn forge(&self, oracle: &mut Oracle, _: &mut StreamRng) -> Result<Forgery> {
        let state = oracle.query(&self.query)?;
        Ok(Forgery { x: self.target.clone(), state })
    }
}

/// Reads the challenger's answer for `target` without querying it.
pub struct OmniscientForger {
    pub target: Vec<bool>,
}

impl UpsgAdversary for OmniscientForger {
    fn forge(&self, oracle: &mut Oracle, _: &mut StreamRng) -> Result<Forgery> {
        let state = oracle.challenge(&self.target)?;
        Ok(Forgery { x: self.target.clone(), state })
    }
}

/// Picks `target` without querying it, then echoes the copies plus
/// orthogonal junk.
pub struct HonestEcho {
    pub target: Vec<bool>,
}

impl UcfsgAdversary for HonestEcho {
    fn choose(&self, _: &mut Oracle, _: &mut StreamRng) -> Result<Vec<bool>> {
        Ok(self.target.clone())
    }

    fn respond(&self, copies: &[StateVector], t_prime: usize, _: &mut StreamRng) -> Result<StateVector> {
        let junk = orthogonal_to(&first(copies, "the answer")?)?;
        pad_registers(copies, t_prime, || Ok(junk.clone()))
    }
}

/// Echoes the copies and pads with further copies, which no physical
/// adversary could do.
pub struct OmniscientFsgCloner {
    pub target: Vec<bool>,
}

impl UcfsgAdversary for OmniscientFsgCloner {
    fn choose(&self, _: &mut Oracle, _: &mut StreamRng) -> Result<Vec<bool>> {
        Ok(self.target.clone())
    }

    fn respond(&self, copies: &[StateVector], t_prime: usize, _: &mut StreamRng) -> Result<StateVector> {
        let answer = first(copies, "the answer")?;
        pad_registers(copies, t_prime, || Ok(answer.clone()))
    }
}
