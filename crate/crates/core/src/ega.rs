//! Classical group actions at toy scale: the exponentiation action on a
//! prime-order subgroup, the Naor–Reingold PRF over it, the classical
//! assumption distributions, and exhaustive structural checks.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Error, Result};
use crate::games::DistributionId;

/// Group and set elements are carried by their canonical `u64` encodings.
pub trait GroupAction: Sync {
    /// Every group element, identity first.
    fn group_elements(&self) -> Vec<u64>;
    fn set_elements(&self) -> Vec<u64>;
    fn identity(&self) -> u64;
    fn op(&self, g: u64, h: u64) -> u64;
    fn inverse(&self, g: u64) -> u64;
    fn act(&self, g: u64, s: u64) -> u64;
    fn origin(&self) -> u64;
    fn is_commutative(&self) -> bool;

    fn sample_group(&self, rng: &mut dyn rand::RngCore) -> u64 {
        let all = self.group_elements();
        all[rng.random_range(0..all.len())]
    }

    fn sample_set(&self, rng: &mut dyn rand::RngCore) -> u64 {
        let all = self.set_elements();
        all[rng.random_range(0..all.len())]
    }
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `G = (Z/qZ)^×` acting on the order-`q` subgroup of `(Z/pZ)^×` minus {1}
/// by `a ⋆ s = s^a mod p`. Regular, since `s ↦ s^a` permutes the generators
/// of a cyclic group of prime order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ExpParams", into = "ExpParams")]
pub struct ExpAction {
    p: u64,
    q: u64,
    generator: u64,
    s0: u64,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
struct ExpParams {
    p: u64,
    q: u64,
    generator: u64,
    s0: u64,
}

impl TryFrom<ExpParams> for ExpAction {
    type Error = Error;
    fn try_from(r: ExpParams) -> Result<Self> {
        ExpAction::new(r.p, r.q, r.generator, r.s0)
    }
}

impl From<ExpAction> for ExpParams {
    fn from(a: ExpAction) -> Self {
        ExpParams { p: a.p, q: a.q, generator: a.generator, s0: a.s0 }
    }
}

impl ExpAction {
    pub fn new(p: u64, q: u64, generator: u64, s0: u64) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(invalid(format!("p = {p} exceeds 2^31")));
        }
        if !is_prime(p) || !is_prime(q) {
            return Err(invalid(format!("p = {p} and q = {q} must both be prime")));
        }
        if !(p - 1).is_multiple_of(q) {
            return Err(invalid(format!("q = {q} does not divide p − 1 = {}", p - 1)));
        }
        let generator = generator % p;
        if generator <= 1 || pow_mod(generator, q, p) != 1 {
            return Err(invalid(format!("{generator} does not have order {q} mod {p}")));
        }
        let s0 = s0 % p;
        if s0 == 1 || pow_mod(s0, q, p) != 1 || s0 == 0 {
            return Err(invalid(format!("origin {s0} is not in the subgroup minus {{1}}")));
        }
        Ok(ExpAction { p, q, generator, s0 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn generator(&self) -> u64 {
        self.generator
    }
}

/// The exponentiation action with the generator as origin.
pub fn instantiate_exp_action(p: u64, q: u64, generator: u64) -> Result<ExpAction> {
    ExpAction::new(p, q, generator, generator)
}

impl GroupAction for ExpAction {
    fn group_elements(&self) -> Vec<u64> {
        (1..self.q).collect()
    }
    fn set_elements(&self) -> Vec<u64> {
        (1..self.q).map(|k| pow_mod(self.generator, k, self.p)).collect()
    }
    fn identity(&self) -> u64 {
        1
    }
    fn op(&self, g: u64, h: u64) -> u64 {
        g * h % self.q
    }
    fn inverse(&self, g: u64) -> u64 {
        pow_mod(g, self.q - 2, self.q)
    }
    fn act(&self, g: u64, s: u64) -> u64 {
        pow_mod(s, g, self.p)
    }
    fn origin(&self) -> u64 {
        self.s0
    }
    fn is_commutative(&self) -> bool {
        true
    }
}

/// `Z_n` acting trivially on `{0, …, m − 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrivialAction {
    pub group_order: u64,
    pub set_size: u64,
}

impl GroupAction for TrivialAction {
    fn group_elements(&self) -> Vec<u64> {
        (0..self.group_order).collect()
    }
    fn set_elements(&self) -> Vec<u64> {
        (0..self.set_size).collect()
    }
    fn identity(&self) -> u64 {
        0
    }
    fn op(&self, g: u64, h: u64) -> u64 {
        (g + h) % self.group_order
    }
    fn inverse(&self, g: u64) -> u64 {
        (self.group_order - g) % self.group_order
    }
    fn act(&self, _: u64, s: u64) -> u64 {
        s
    }
    fn origin(&self) -> u64 {
        0
    }
    fn is_commutative(&self) -> bool {
        true
    }
}

/// `Z_n` acting on itself by addition, plus one extra point `n` that every
/// element fixes: faithful, neither free nor transitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaithfulNotFree {
    pub n: u64,
}

impl GroupAction for FaithfulNotFree {
    fn group_elements(&self) -> Vec<u64> {
        (0..self.n).collect()
    }
    fn set_elements(&self) -> Vec<u64> {
        (0..=self.n).collect()
    }
    fn identity(&self) -> u64 {
        0
    }
    fn op(&self, g: u64, h: u64) -> u64 {
        (g + h) % self.n
    }
    fn inverse(&self, g: u64) -> u64 {
        (self.n - g) % self.n
    }
    fn act(&self, g: u64, s: u64) -> u64 {
        if s == self.n {
            s
        } else {
            (g + s) % self.n
        }
    }
    fn origin(&self) -> u64 {
        0
    }
    fn is_commutative(&self) -> bool {
        true
    }
}

/// `(g_0, …, g_ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NrPrfKey {
    pub elements: Vec<u64>,
}

impl NrPrfKey {
    pub fn ell(&self) -> usize {
        self.elements.len().saturating_sub(1)
    }
}

pub fn nr_prf_keygen<R: Rng>(ega: &dyn GroupAction, ell: usize, rng: &mut R) -> Result<NrPrfKey> {
    if ell == 0 {
        return Err(invalid("ℓ must be at least 1"));
    }
    Ok(NrPrfKey { elements: (0..=ell).map(|_| ega.sample_group(rng)).collect() })
}

/// `(g_ℓ^{x_ℓ} ⋯ g_1^{x_1} · g_0) ⋆ s_0`.
pub fn nr_prf(ega: &dyn GroupAction, key: &NrPrfKey, x: &[bool]) -> Result<u64> {
    if key.elements.len() < 2 {
        return Err(invalid("key needs g_0 and at least one g_i"));
    }
    if x.len() != key.ell() {
        return Err(Error::WrongInputLength { expected: key.ell(), found: x.len() });
    }
    let product = x
        .iter()
        .zip(&key.elements[1..])
        .filter(|(bit, _)| **bit)
        .fold(key.elements[0], |acc, (_, &g)| ega.op(g, acc));
    Ok(ega.act(product, ega.origin()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassicalId {
    #[serde(rename = "PR0")]
    Pr0,
    #[serde(rename = "PR1")]
    Pr1,
    #[serde(rename = "wPR0")]
    Wpr0,
    #[serde(rename = "wPR1")]
    Wpr1,
    #[serde(rename = "DDH0")]
    Ddh0,
    #[serde(rename = "DDH1")]
    Ddh1,
    #[serde(rename = "NR0")]
    Nr0,
    #[serde(rename = "NR1")]
    Nr1,
}

impl ClassicalId {
    pub const ALL: [ClassicalId; 8] = [
        ClassicalId::Pr0,
        ClassicalId::Pr1,
        ClassicalId::Wpr0,
        ClassicalId::Wpr1,
        ClassicalId::Ddh0,
        ClassicalId::Ddh1,
        ClassicalId::Nr0,
        ClassicalId::Nr1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassicalId::Pr0 => "PR0",
            ClassicalId::Pr1 => "PR1",
            ClassicalId::Wpr0 => "wPR0",
            ClassicalId::Wpr1 => "wPR1",
            ClassicalId::Ddh0 => "DDH0",
            ClassicalId::Ddh1 => "DDH1",
            ClassicalId::Nr0 => "NR0",
            ClassicalId::Nr1 => "NR1",
        }
    }

    /// The quantum distribution with the same block structure. Weak
    /// pseudorandomness corresponds to Haar-DDH.
    pub fn quantum_counterpart(self) -> DistributionId {
        match self {
            ClassicalId::Pr0 => DistributionId::Pr0,
            ClassicalId::Pr1 => DistributionId::Pr1,
            ClassicalId::Wpr0 => DistributionId::HaarDdh0,
            ClassicalId::Wpr1 => DistributionId::HaarDdh1,
            ClassicalId::Ddh0 => DistributionId::Ddh0,
            ClassicalId::Ddh1 => DistributionId::Ddh1,
            ClassicalId::Nr0 => DistributionId::Nr0,
            ClassicalId::Nr1 => DistributionId::Nr1,
        }
    }
}

impl fmt::Display for ClassicalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassicalId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ClassicalId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| invalid(format!("unknown classical distribution {s:?}")))
    }
}

/// `blocks[q][component]`, canonical set elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalSamples {
    pub id: ClassicalId,
    pub blocks: Vec<Vec<u64>>,
}

/// PR ignores `q`; DDH repeats its single tuple `q` times, as the quantum
/// DDH distribution does.
pub fn gen_classical_distribution<R: Rng>(
    id: ClassicalId,
    ega: &dyn GroupAction,
    q: usize,
    rng: &mut R,
) -> Result<ClassicalSamples> {
    if q == 0 {
        return Err(invalid("Q must be at least 1"));
    }
    let s0 = ega.origin();
    let blocks = match id {
        ClassicalId::Pr0 => vec![vec![s0, ega.act(ega.sample_group(rng), s0)]],
        ClassicalId::Pr1 => vec![vec![s0, ega.sample_set(rng)]],
        ClassicalId::Wpr0 => {
            let g = ega.sample_group(rng);
            (0..q)
                .map(|_| {
                    let s = ega.sample_set(rng);
                    vec![s, ega.act(g, s)]
                })
                .collect()
        }
        ClassicalId::Wpr1 => (0..q).map(|_| vec![ega.sample_set(rng), ega.sample_set(rng)]).collect(),
        ClassicalId::Ddh0 | ClassicalId::Ddh1 => {
            let gt = ega.sample_group(rng);
            let g = ega.sample_group(rng);
            let last = if id == ClassicalId::Ddh0 { ega.op(gt, g) } else { ega.sample_group(rng) };
            let tuple = vec![s0, ega.act(gt, s0), ega.act(g, s0), ega.act(last, s0)];
            vec![tuple; q]
        }
        ClassicalId::Nr0 => {
            let gt = ega.sample_group(rng);
            (0..q)
                .map(|_| {
                    let gi = ega.sample_group(rng);
                    vec![ega.act(gi, s0), ega.act(ega.op(gt, gi), s0)]
                })
                .collect()
        }
        ClassicalId::Nr1 => (0..q)
            .map(|_| vec![ega.act(ega.sample_group(rng), s0), ega.act(ega.sample_group(rng), s0)])
            .collect(),
    };
    Ok(ClassicalSamples { id, blocks })
}

/// Largest `|G| · |S|` the exhaustive checks accept.
pub const EXHAUSTIVE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub transitive: bool,
    pub free: bool,
    pub faithful: bool,
    pub regular: bool,
}

fn check_size(ega: &dyn GroupAction) -> Result<(Vec<u64>, Vec<u64>)> {
    let g = ega.group_elements();
    let s = ega.set_elements();
    if g.len().saturating_mul(s.len()) > EXHAUSTIVE_CAP {
        return Err(Error::TooManyQubits { requested: g.len() * s.len(), cap: EXHAUSTIVE_CAP });
    }
    Ok((g, s))
}

/// Decides each property by brute force over all `(g, s)`.
pub fn check_properties(ega: &dyn GroupAction) -> Result<PropertyReport> {
    let (group, set) = check_size(ega)?;
    let id = ega.identity();
    let all: HashSet<u64> = set.iter().copied().collect();
    let transitive = set.iter().all(|&s| group.iter().map(|&g| ega.act(g, s)).collect::<HashSet<_>>() == all);
    let others = || group.iter().copied().filter(move |&g| g != id);
    let free = others().all(|g| set.iter().all(|&s| ega.act(g, s) != s));
    let faithful = others().all(|g| set.iter().any(|&s| ega.act(g, s) != s));
    Ok(PropertyReport { transitive, free, faithful, regular: transitive && free })
}

/// Identity and compatibility, exhaustively.
pub fn check_axioms(ega: &dyn GroupAction) -> Result<bool> {
    let (group, set) = check_size(ega)?;
    if group.len().saturating_mul(group.len()).saturating_mul(set.len()) > 100 * EXHAUSTIVE_CAP {
        return Err(Error::Precondition("compatibility check too large".into()));
    }
    let identity = set.iter().all(|&s| ega.act(ega.identity(), s) == s);
    let compatible = group.iter().all(|&g| {
        group.iter().all(|&h| set.iter().all(|&s| ega.act(ega.op(g, h), s) == ega.act(g, ega.act(h, s))))
    });
    Ok(identity && compatible)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitStatistic {
    pub trials: usize,
    pub chi_square: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Chi-square goodness of fit of `{g ⋆ s_0 : g uniform}` against uniform on
/// `S`, without checking the hypotheses.
pub fn orbit_uniformity_statistic<R: Rng>(ega: &dyn GroupAction, trials: usize, rng: &mut R) -> Result<OrbitStatistic> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let set = ega.set_elements();
    if set.len() == 1 {
        return Ok(OrbitStatistic { trials, chi_square: 0.0, dof: 0, p_value: 1.0 });
    }
    let mut counts = vec![0usize; set.len()];
    let s0 = ega.origin();
    for _ in 0..trials {
        let s = ega.act(ega.sample_group(rng), s0);
        let i = set.iter().position(|&e| e == s).ok_or_else(|| Error::Precondition(format!("{s} not in S")))?;
        counts[i] += 1;
    }
    let expected = trials as f64 / set.len() as f64;
    let chi_square = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dof = set.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| invalid(e.to_string()))?;
    Ok(OrbitStatistic { trials, chi_square, dof, p_value: dist.sf(chi_square) })
}

/// As [`orbit_uniformity_statistic`], but refuses actions that are not
/// transitive and faithful.
pub fn check_orbit_uniformity<R: Rng>(ega: &dyn GroupAction, trials: usize, rng: &mut R) -> Result<OrbitStatistic> {
    let props = check_properties(ega)?;
    if !(props.transitive && props.faithful) {
        return Err(Error::Precondition("orbit uniformity needs a transitive and faithful action".into()));
    }
    orbit_uniformity_statistic(ega, trials, rng)
}
