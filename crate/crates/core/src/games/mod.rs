//! Security-game harness: sample distributions for every assumption, game
//! runners with pluggable adversaries, and Monte-Carlo estimation.
//!
//! Every runner takes a master seed. Trial `i` draws all of its randomness
//! from its own counter-based stream, so results do not depend on how rayon
//! schedules trials.

mod adversaries;
mod distributions;
mod runners;

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::seed::{Rng as StreamRng, SeedTree};

pub use adversaries::*;
pub use distributions::{gen_distribution, DistParams, DistributionId, SampleSet, Shape};
pub use runners::*;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Point estimate with its Wilson 95% score interval.
pub fn estimate(successes: usize, trials: usize) -> Result<Estimate> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    if successes > trials {
        return Err(invalid(format!("{successes} successes out of {trials} trials")));
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let ci_low = if successes == 0 { 0.0 } else { (center - half).clamp(0.0, p) };
    let ci_high = if successes == trials { 1.0 } else { (center + half).clamp(p, 1.0) };
    Ok(Estimate { estimate: p, ci_low, ci_high })
}

/// Newcombe's hybrid score interval for `p1 − p2`, folded onto `|p1 − p2|`.
pub fn advantage_estimate(ones_left: usize, left: usize, ones_right: usize, right: usize) -> Result<Estimate> {
    if left == 0 || right == 0 {
        return Err(Error::Precondition("both sides need at least one trial".into()));
    }
    let a = estimate(ones_left, left)?;
    let b = estimate(ones_right, right)?;
    let d = a.estimate - b.estimate;
    let lo = d - ((a.estimate - a.ci_low).powi(2) + (b.ci_high - b.estimate).powi(2)).sqrt();
    let hi = d + ((a.ci_high - a.estimate).powi(2) + (b.estimate - b.ci_low).powi(2)).sqrt();
    let (ci_low, ci_high) = if lo >= 0.0 {
        (lo, hi)
    } else if hi <= 0.0 {
        (-hi, -lo)
    } else {
        (0.0, hi.max(-lo))
    };
    Ok(Estimate { estimate: d.abs(), ci_low, ci_high: ci_high.min(1.0) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One trial. `output` is a distinguisher's bit, `hits` a UC-style count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct TrialOutcome {
    pub success: bool,
    pub side: Option<Side>,
    pub output: Option<bool>,
    pub hits: Option<usize>,
}

impl TrialOutcome {
    pub fn win(success: bool) -> Self {
        TrialOutcome { success, ..Default::default() }
    }

    pub fn sided(side: Side, output: bool) -> Self {
        TrialOutcome { success: output, side: Some(side), output: Some(output), hits: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCounts {
    pub left_trials: usize,
    pub left_ones: usize,
    pub right_trials: usize,
    pub right_ones: usize,
}

impl SideCounts {
    pub fn left_rate(&self) -> f64 {
        self.left_ones as f64 / self.left_trials as f64
    }
    pub fn right_rate(&self) -> f64 {
        self.right_ones as f64 / self.right_trials as f64
    }
}

/// For winning games `successes` counts wins and `estimate` is the win rate.
/// For distinguishing games `successes` counts outputs of 1, `estimate` is
/// the advantage `|Pr[1 | left] − Pr[1 | right]|` and `sides` has the split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    pub trials: usize,
    pub successes: usize,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<SideCounts>,
    #[serde(skip)]
    pub outcomes: Vec<TrialOutcome>,
}

impl GameResult {
    fn from_wins(seed: u64, outcomes: Vec<TrialOutcome>) -> Result<Self> {
        let successes = outcomes.iter().filter(|o| o.success).count();
        let e = estimate(successes, outcomes.len())?;
        Ok(GameResult {
            trials: outcomes.len(),
            successes,
            estimate: e.estimate,
            ci_low: e.ci_low,
            ci_high: e.ci_high,
            seed,
            sides: None,
            outcomes,
        })
    }

    fn from_sides(seed: u64, outcomes: Vec<TrialOutcome>) -> Result<Self> {
        let mut c = SideCounts { left_trials: 0, left_ones: 0, right_trials: 0, right_ones: 0 };
        for o in &outcomes {
            let one = o.output == Some(true);
            match o.side {
                Some(Side::Left) => {
                    c.left_trials += 1;
                    c.left_ones += one as usize;
                }
                Some(Side::Right) => {
                    c.right_trials += 1;
                    c.right_ones += one as usize;
                }
                None => return Err(Error::Precondition("trial without a side".into())),
            }
        }
        let e = advantage_estimate(c.left_ones, c.left_trials, c.right_ones, c.right_trials)?;
        Ok(GameResult {
            trials: outcomes.len(),
            successes: c.left_ones + c.right_ones,
            estimate: e.estimate,
            ci_low: e.ci_low,
            ci_high: e.ci_high,
            seed,
            sides: Some(c),
            outcomes,
        })
    }

    pub fn report(&self, game: &str, params: serde_json::Value) -> Report {
        Report {
            game: game.to_string(),
            params,
            seed: self.seed,
            trials: self.trials,
            successes: self.successes,
            estimate: self.estimate,
            ci: [self.ci_low, self.ci_high],
            wall_time_ms: None,
        }
    }

    /// Per-trial outcomes as CSV.
    pub fn outcomes_csv(&self) -> String {
        let mut out = String::from("trial,success,side,output,hits\n");
        for (i, o) in self.outcomes.iter().enumerate() {
            let side = match o.side {
                Some(Side::Left) => "left",
                Some(Side::Right) => "right",
                None => "",
            };
            let output = o.output.map(|b| (b as u8).to_string()).unwrap_or_default();
            let hits = o.hits.map(|h| h.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{i},{},{side},{output},{hits}", o.success as u8);
        }
        out
    }
}

/// `wall_time_ms` stays `null` unless timing is explicitly requested, so
/// that reruns with the same seed are byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub game: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub trials: usize,
    pub successes: usize,
    pub estimate: f64,
    pub ci: [f64; 2],
    pub wall_time_ms: Option<u64>,
}

pub(crate) fn run_trials<F>(seed: u64, label: &str, trials: usize, trial: F) -> Result<Vec<TrialOutcome>>
where
    F: Fn(&mut StreamRng) -> Result<TrialOutcome> + Sync,
{
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let tree = SeedTree::new(seed);
    (0..trials as u64).into_par_iter().map(|i| trial(&mut tree.stream(label, i))).collect()
}
