use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::qga::{QgaDescription, QgaInstance};
use crate::simcore::{sample_haar_state, StateVector};

/// The sample distributions of the PR, Haar-PR, DDH, Haar-DDH and NR
/// assumptions, their multi-sample forms, and the intermediate NR hybrids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistributionId {
    #[serde(rename = "PR0")]
    Pr0,
    #[serde(rename = "PR1")]
    Pr1,
    #[serde(rename = "PRq0")]
    PrQ0,
    #[serde(rename = "PRq1")]
    PrQ1,
    #[serde(rename = "HaarPR0")]
    HaarPr0,
    #[serde(rename = "HaarPR1")]
    HaarPr1,
    #[serde(rename = "HaarPRq0")]
    HaarPrQ0,
    #[serde(rename = "HaarPRq1")]
    HaarPrQ1,
    #[serde(rename = "DDH0")]
    Ddh0,
    #[serde(rename = "DDH1")]
    Ddh1,
    #[serde(rename = "HaarDDH0")]
    HaarDdh0,
    #[serde(rename = "HaarDDH1")]
    HaarDdh1,
    #[serde(rename = "NR0")]
    Nr0,
    #[serde(rename = "NR1")]
    Nr1,
    #[serde(rename = "NRprime")]
    NrPrime,
    #[serde(rename = "NRprime0")]
    NrPrime0,
    #[serde(rename = "NRprime1")]
    NrPrime1,
}

use DistributionId::*;

impl DistributionId {
    pub const ALL: [DistributionId; 17] = [
        Pr0, Pr1, PrQ0, PrQ1, HaarPr0, HaarPr1, HaarPrQ0, HaarPrQ1, Ddh0, Ddh1, HaarDdh0, HaarDdh1, Nr0,
        Nr1, NrPrime, NrPrime0, NrPrime1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pr0 => "PR0",
            Pr1 => "PR1",
            PrQ0 => "PRq0",
            PrQ1 => "PRq1",
            HaarPr0 => "HaarPR0",
            HaarPr1 => "HaarPR1",
            HaarPrQ0 => "HaarPRq0",
            HaarPrQ1 => "HaarPRq1",
            Ddh0 => "DDH0",
            Ddh1 => "DDH1",
            HaarDdh0 => "HaarDDH0",
            HaarDdh1 => "HaarDDH1",
            Nr0 => "NR0",
            Nr1 => "NR1",
            NrPrime => "NRprime",
            NrPrime0 => "NRprime0",
            NrPrime1 => "NRprime1",
        }
    }

    /// The single-sample PR and Haar-PR distributions ignore `Q`.
    pub fn is_multi_sample(self) -> bool {
        !matches!(self, Pr0 | Pr1 | HaarPr0 | HaarPr1)
    }

    pub fn shape(self, params: &DistParams) -> Shape {
        let blocks = if self.is_multi_sample() { params.q } else { 1 };
        let components = match self {
            PrQ0 | PrQ1 => 1,
            Ddh0 | Ddh1 => 4,
            _ => 2,
        };
        Shape { blocks, copies: params.t, components }
    }
}

impl fmt::Display for DistributionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistributionId {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        DistributionId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| invalid(format!("unknown distribution id {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistParams {
    pub qga: QgaInstance,
    pub t: usize,
    pub q: usize,
}

impl DistParams {
    pub fn new(qga: QgaInstance, t: usize, q: usize) -> Result<Self> {
        if t == 0 || q == 0 {
            return Err(invalid("t and Q must be at least 1"));
        }
        Ok(DistParams { qga, t, q })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub blocks: usize,
    pub copies: usize,
    pub components: usize,
}

/// `blocks[q][copy][component]`: block `q` is the `t`-fold repetition of one
/// tuple, so all copies inside a block are bit-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub id: DistributionId,
    pub blocks: Vec<Vec<Vec<StateVector>>>,
}

impl SampleSet {
    pub fn shape(&self) -> Shape {
        Shape {
            blocks: self.blocks.len(),
            copies: self.blocks.first().map_or(0, Vec::len),
            components: self.blocks.first().and_then(|b| b.first()).map_or(0, Vec::len),
        }
    }

    pub fn tuple(&self, block: usize) -> &[StateVector] {
        &self.blocks[block][0]
    }
}

fn repeat(tuple: Vec<StateVector>, t: usize) -> Vec<Vec<StateVector>> {
    vec![tuple; t]
}

pub fn gen_distribution<R: Rng + ?Sized>(id: DistributionId, params: &DistParams, rng: &mut R) -> Result<SampleSet> {
    let DistParams { qga, t, q } = *params;
    if t == 0 || q == 0 {
        return Err(invalid("t and Q must be at least 1"));
    }
    let n = qga.num_qubits;
    let s0 = qga.sample_s().expand()?;
    let g = |rng: &mut R| -> Result<QgaDescription> { qga.sample_g(rng) };
    let haar = |rng: &mut R| sample_haar_state(n, rng);
    let blocks_of = |rng: &mut R, f: &mut dyn FnMut(&mut R) -> Result<Vec<StateVector>>| -> Result<_> {
        (0..q).map(|_| f(rng).map(|tuple| repeat(tuple, t))).collect::<Result<Vec<_>>>()
    };

    let blocks = match id {
        Pr0 => {
            let h = g(rng)?;
            vec![repeat(vec![s0.clone(), h.apply(&s0)?], t)]
        }
        Pr1 => vec![repeat(vec![s0.clone(), haar(rng)?], t)],
        PrQ0 => blocks_of(rng, &mut |rng| Ok(vec![g(rng)?.apply(&s0)?]))?,
        PrQ1 => blocks_of(rng, &mut |rng| Ok(vec![haar(rng)?]))?,
        HaarPr0 => {
            let s = haar(rng)?;
            let h = g(rng)?;
            let hs = h.apply(&s)?;
            vec![repeat(vec![s, hs], t)]
        }
        HaarPr1 => vec![repeat(vec![haar(rng)?, haar(rng)?], t)],
        HaarPrQ0 | HaarDdh1 | NrPrime => blocks_of(rng, &mut |rng| {
            let s = haar(rng)?;
            let hs = g(rng)?.apply(&s)?;
            Ok(vec![s, hs])
        })?,
        HaarPrQ1 | NrPrime1 => blocks_of(rng, &mut |rng| Ok(vec![haar(rng)?, haar(rng)?]))?,
        Ddh0 | Ddh1 => {
            let gt = g(rng)?;
            let gg = g(rng)?;
            let last = if id == Ddh0 { gt.apply(&gg.apply(&s0)?)? } else { g(rng)?.apply(&s0)? };
            let tuple = vec![s0.clone(), gt.apply(&s0)?, gg.apply(&s0)?, last];
            vec![repeat(tuple, t); q]
        }
        HaarDdh0 | NrPrime0 => {
            let shared = g(rng)?;
            blocks_of(rng, &mut |rng| {
                let s = haar(rng)?;
                let gs = shared.apply(&s)?;
                Ok(vec![s, gs])
            })?
        }
        Nr0 => {
            let gt = g(rng)?;
            blocks_of(rng, &mut |rng| {
                let y = g(rng)?.apply(&s0)?;
                let z = gt.apply(&y)?;
                Ok(vec![y, z])
            })?
        }
        Nr1 => blocks_of(rng, &mut |rng| {
            let y = g(rng)?.apply(&s0)?;
            let z = g(rng)?.apply(&s0)?;
            Ok(vec![y, z])
        })?,
    };
    Ok(SampleSet { id, blocks })
}
