use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use qgalab::nrprfsg::{parse_bits, OracleMode};
use qgalab::qga::{Candidate, QgaInstance};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateKind {
    RandomCircuit,
    IqpDiagonal,
    IqpSparse,
    Trivial,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Every flag is optional so that a `--config` file can fill the gaps;
/// flags given on the command line win.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Opts {
    /// Master seed; all randomness is derived from it
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Number of qubits λ
    #[arg(long)]
    pub lambda: Option<usize>,
    /// Input length ℓ (PRFSG key length, message length)
    #[arg(long)]
    pub ell: Option<usize>,
    /// Copies handed to the adversary / ciphertext copies
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub t0: Option<usize>,
    #[arg(long)]
    pub tprime: Option<usize>,
    /// Blocks Q of a multi-sample distribution
    #[arg(long)]
    pub q: Option<usize>,
    /// Degree bound of candidate 3
    #[arg(long)]
    pub d: Option<usize>,
    /// Term bound of candidate 3
    #[arg(long)]
    pub w: Option<usize>,
    /// Brickwork depth of candidate 1
    #[arg(long)]
    pub depth: Option<usize>,
    /// Gate count of candidate 2
    #[arg(long)]
    pub gates: Option<usize>,
    #[arg(long, value_enum)]
    pub candidate: Option<CandidateKind>,
    /// Game id
    #[arg(long)]
    pub id: Option<String>,
    #[arg(long)]
    pub adversary: Option<String>,
    /// Left distribution or oracle mode of a distinguishing game
    #[arg(long)]
    pub left: Option<String>,
    #[arg(long)]
    pub right: Option<String>,
    /// Oracle mode: real, hybrid, ideal or game-J
    #[arg(long)]
    pub mode: Option<String>,
    /// Challenger state in the UP/UC games: sampler or haar
    #[arg(long)]
    pub source: Option<String>,
    /// Input bit string, e.g. 0110
    #[arg(long)]
    pub x: Option<String>,
    /// What `sample` emits: element, state, owsg-key or prfsg-key
    #[arg(long)]
    pub artifact: Option<String>,
    /// EGA modulus p
    #[arg(long)]
    pub p: Option<u64>,
    /// EGA subgroup order
    #[arg(long)]
    pub order: Option<u64>,
    #[arg(long)]
    pub generator: Option<u64>,
    /// EGA fixture {p, q, generator, s0}
    #[arg(long)]
    pub fixture: Option<PathBuf>,

    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip)]
    pub format: Option<Format>,
    /// JSON file with any of the options above
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Record wall-clock time in the report (makes reruns differ)
    #[arg(long)]
    #[serde(skip)]
    pub timing: bool,
}

macro_rules! prefer_flags {
    ($flags:ident, $file:ident; $($field:ident),*) => {
        $( $flags.$field = $flags.$field.take().or($file.$field); )*
    };
}

impl Opts {
    pub fn load(mut self) -> Result<Opts, CliError> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let file: Opts = read_json(&path)?;
        prefer_flags!(self, file; seed, trials, lambda, ell, t, t0, tprime, q, d, w, depth, gates, candidate, id,
            adversary, left, right, mode, source, x, artifact, p, order, generator, fixture);
        Ok(self)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn trials(&self) -> Result<usize, CliError> {
        positive("trials", self.trials.unwrap_or(1000))
    }

    pub fn lambda(&self) -> usize {
        self.lambda.unwrap_or(3)
    }

    pub fn qga(&self) -> Result<QgaInstance, CliError> {
        let n = self.lambda();
        let candidate = match self.candidate.unwrap_or(CandidateKind::IqpSparse) {
            CandidateKind::RandomCircuit => Candidate::RandomCircuit { depth: self.depth.unwrap_or(n.max(2)) },
            CandidateKind::IqpDiagonal => Candidate::IqpDiagonal { num_gates: self.gates.unwrap_or(5 * n * n) },
            CandidateKind::IqpSparse => Candidate::IqpSparse {
                degree_bound: self.d.unwrap_or(3.min(n)),
                term_bound: self.w.unwrap_or(n * n),
            },
            CandidateKind::Trivial => Candidate::Trivial,
        };
        Ok(QgaInstance::new(n, candidate)?)
    }

    pub fn ell(&self, default: usize) -> Result<usize, CliError> {
        let ell = positive("ℓ", self.ell.unwrap_or(default))?;
        if ell > 63 {
            return Err(CliError::Validation(format!("ℓ = {ell} exceeds 63")));
        }
        Ok(ell)
    }

    /// `--x`, defaulting to `fill^ℓ`.
    pub fn input(&self, ell: usize, fill: bool) -> Result<Vec<bool>, CliError> {
        match &self.x {
            None => Ok(vec![fill; ell]),
            Some(s) => {
                let x = parse_bits(s)?;
                if x.len() != ell {
                    return Err(CliError::Validation(format!("--x has {} bits, expected ℓ = {ell}", x.len())));
                }
                Ok(x)
            }
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

pub fn positive(name: &str, v: usize) -> Result<usize, CliError> {
    if v == 0 {
        return Err(CliError::Validation(format!("{name} must be at least 1")));
    }
    Ok(v)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn parse_mode(s: &str) -> Result<OracleMode, CliError> {
    match s {
        "real" => Ok(OracleMode::Real),
        "hybrid" => Ok(OracleMode::Hybrid),
        "ideal" => Ok(OracleMode::Ideal),
        _ => s
            .strip_prefix("game-")
            .and_then(|j| j.parse().ok())
            .map(OracleMode::Game)
            .ok_or_else(|| CliError::Validation(format!("unknown oracle mode {s:?}"))),
    }
}

pub fn mode_name(mode: OracleMode) -> String {
    match mode {
        OracleMode::Real => "real".into(),
        OracleMode::Hybrid => "hybrid".into(),
        OracleMode::Ideal => "ideal".into(),
        OracleMode::Game(j) => format!("game-{j}"),
    }
}

/// Candidate parameters as recorded in every report.
pub fn qga_params(qga: &QgaInstance) -> Value {
    json!(qga)
}
