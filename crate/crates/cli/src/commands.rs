use std::time::Instant;

use qgalab::ega::{
    check_axioms, check_orbit_uniformity, check_properties, instantiate_exp_action, nr_prf, nr_prf_keygen,
    orbit_uniformity_statistic, ExpAction,
};
use qgalab::games::*;
use qgalab::nrprfsg::{all_inputs, format_bits, keygen, Oracle};
use qgalab::primitives::*;
use qgalab::qga::{Candidate, QgaInstance};
use qgalab::seed::SeedTree;
use qgalab::simcore::{sample_haar_state, StateVector, DENSE_UNITARY_CAP};
use serde_json::{json, Value};

use crate::config::{mode_name, parse_mode, positive, qga_params, read_json, Format, Opts};
use crate::CliError;

fn run<T>(r: qgalab::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Runtime(e.to_string()))
}

fn unknown(what: &str, name: &str, options: &[&str]) -> CliError {
    CliError::Validation(format!("unknown {what} {name:?}; expected one of {}", options.join(", ")))
}

fn estimate_json(successes: usize, trials: usize) -> Result<Value, CliError> {
    let e = run(estimate(successes, trials))?;
    Ok(json!({"successes": successes, "trials": trials, "estimate": e.estimate, "ci": [e.ci_low, e.ci_high]}))
}

fn json_only(opts: &Opts, command: &str) -> Result<(), CliError> {
    if opts.format() == Format::Csv {
        return Err(CliError::Validation(format!("{command} only writes JSON")));
    }
    Ok(())
}

pub fn sample(opts: &Opts) -> Result<String, CliError> {
    json_only(opts, "sample")?;
    let qga = opts.qga()?;
    let seed = opts.seed();
    let kind = opts.artifact.as_deref().unwrap_or("element");
    let ell = match kind {
        "prfsg-key" => Some(opts.ell(3)?),
        "element" | "state" | "owsg-key" => None,
        other => return Err(unknown("artifact", other, &["element", "state", "owsg-key", "prfsg-key"])),
    };
    let mut rng = SeedTree::new(seed).stream("sample", 0);
    let artifact = match kind {
        "element" => json!(run(qga.sample_g(&mut rng))?),
        "state" => {
            let g = run(qga.sample_g(&mut rng))?;
            json!({"element": g, "state": run(g.apply(&run(qga.sample_s().expand())?))?})
        }
        "owsg-key" => json!(run(owsg_keygen(&qga, &mut rng))?),
        _ => json!(run(keygen(&qga, ell.expect("checked above"), &mut rng))?),
    };
    let mut params = json!({"qga": qga_params(&qga), "artifact": kind});
    if let Some(ell) = ell {
        params["ell"] = json!(ell);
    }
    pretty(&json!({"command": "sample", "params": params, "seed": seed, "artifact": artifact}))
}

pub const GAMES: [&str; 8] = ["ow", "up", "uc", "distinguish", "prfsg", "upsg", "ucfsg", "attack-iqp-pru"];

fn source(opts: &Opts) -> Result<StateSource, CliError> {
    match opts.source.as_deref().unwrap_or("sampler") {
        "sampler" => Ok(StateSource::Sampler),
        "haar" => Ok(StateSource::Haar),
        other => Err(unknown("state source", other, &["sampler", "haar"])),
    }
}

/// Everything a game needs, validated; running it is the only step left.
type Job<'a> = Box<dyn FnOnce() -> qgalab::Result<GameResult> + 'a>;

fn game_job<'a>(opts: &'a Opts, qga: &'a QgaInstance, trials: usize, seed: u64) -> Result<(Value, Job<'a>), CliError> {
    let id = opts.id.as_deref().ok_or_else(|| CliError::Validation("game needs --id".into()))?;
    let mut params = json!({"qga": qga_params(qga)});
    let adversary = |default: &'static str| opts.adversary.clone().unwrap_or_else(|| default.to_string());
    let job: Job<'a> = match id {
        "ow" => {
            let t = positive("t", opts.t.unwrap_or(1))?;
            let name = adversary("identity");
            let adv: Box<dyn OwAdversary> = match name.as_str() {
                "identity" => Box::new(IdentityGuess),
                "omniscient" => Box::new(OmniscientOw),
                "orthogonal" => Box::new(OrthogonalGuess),
                other => return Err(unknown("ow adversary", other, &["identity", "omniscient", "orthogonal"])),
            };
            params["t"] = json!(t);
            params["adversary"] = json!(name);
            Box::new(move || run_ow_game(qga, adv.as_ref(), t, trials, seed))
        }
        "up" => {
            let t = positive("t", opts.t.unwrap_or(1))?;
            let src = source(opts)?;
            let name = adversary("copy");
            let adv: Box<dyn UpAdversary> = match name.as_str() {
                "copy" => Box::new(CopyInput),
                "omniscient" => Box::new(OmniscientUp),
                "zero" => Box::new(FixedState(StateVector::zero(qga.num_qubits)?)),
                other => return Err(unknown("up adversary", other, &["copy", "omniscient", "zero"])),
            };
            params["t"] = json!(t);
            params["source"] = json!(src);
            params["adversary"] = json!(name);
            Box::new(move || run_up_game(qga, adv.as_ref(), t, src, trials, seed))
        }
        "uc" => {
            let t = positive("t", opts.t.unwrap_or(1))?;
            let uc = UcParams {
                t0: positive("t0", opts.t0.unwrap_or(1))?,
                t,
                t_prime: opts.tprime.unwrap_or(t + 1),
                source: source(opts)?,
            };
            uc.validate(qga.num_qubits)?;
            let name = adversary("echo-junk");
            let adv: Box<dyn UcAdversary> = match name.as_str() {
                "echo-junk" => Box::new(EchoWithJunk),
                "omniscient" => Box::new(OmniscientCloner),
                "haar-padding" => Box::new(HaarPadding),
                other => return Err(unknown("uc adversary", other, &["echo-junk", "omniscient", "haar-padding"])),
            };
            params["uc"] = json!(uc);
            params["adversary"] = json!(name);
            Box::new(move || run_uc_game(qga, adv.as_ref(), uc, trials, seed))
        }
        "distinguish" => {
            let left: DistributionId = opts.left.as_deref().unwrap_or("PR0").parse()?;
            let right: DistributionId = opts.right.as_deref().unwrap_or("PR1").parse()?;
            let dist = DistParams::new(*qga, opts.t.unwrap_or(1), opts.q.unwrap_or(1))?;
            let shape = left.shape(&dist);
            if shape != right.shape(&dist) {
                return Err(CliError::Validation(format!("{left} and {right} have different shapes")));
            }
            let name = adversary("project");
            let adv: Box<dyn Distinguisher> = match name.as_str() {
                "random" => Box::new(RandomGuess),
                "project" => Box::new(ProjectComponentOnto {
                    block: 0,
                    copy: 0,
                    component: shape.components.min(2) - 1,
                    target: StateVector::zero(qga.num_qubits)?,
                }),
                other => return Err(unknown("distinguisher", other, &["random", "project"])),
            };
            params["pair"] = json!([left, right]);
            params["t"] = json!(dist.t);
            params["q"] = json!(dist.q);
            params["adversary"] = json!(name);
            Box::new(move || run_distinguishing_game((left, right), &dist, adv.as_ref(), trials, seed))
        }
        "prfsg" => {
            let ell = opts.ell(3)?;
            let left = parse_mode(opts.left.as_deref().unwrap_or("real"))?;
            let right = parse_mode(opts.right.as_deref().unwrap_or("ideal"))?;
            check_modes(&[left, right], ell)?;
            let x = opts.input(ell, false)?;
            let name = adversary("consistency");
            if name != "consistency" {
                return Err(unknown("prfsg distinguisher", &name, &["consistency"]));
            }
            params["ell"] = json!(ell);
            params["modes"] = json!([mode_name(left), mode_name(right)]);
            params["x"] = json!(format_bits(&x));
            params["adversary"] = json!(name);
            let adv = ConsistencyDistinguisher { x };
            Box::new(move || run_prfsg_game(qga, ell, (left, right), &adv, trials, seed))
        }
        "upsg" => {
            let ell = opts.ell(2)?;
            let mode = parse_mode(opts.mode.as_deref().unwrap_or("real"))?;
            check_modes(&[mode], ell)?;
            let target = opts.input(ell, true)?;
            let name = adversary("replay");
            let adv: Box<dyn UpsgAdversary> = match name.as_str() {
                "replay" => Box::new(Replay { query: vec![false; ell], target: target.clone() }),
                "omniscient" => Box::new(OmniscientForger { target: target.clone() }),
                other => return Err(unknown("upsg adversary", other, &["replay", "omniscient"])),
            };
            params["ell"] = json!(ell);
            params["mode"] = json!(mode_name(mode));
            params["x"] = json!(format_bits(&target));
            params["adversary"] = json!(name);
            Box::new(move || run_upsg_game(qga, ell, mode, adv.as_ref(), trials, seed))
        }
        "ucfsg" => {
            let ell = opts.ell(2)?;
            let mode = parse_mode(opts.mode.as_deref().unwrap_or("real"))?;
            check_modes(&[mode], ell)?;
            let t = positive("t", opts.t.unwrap_or(1))?;
            let t_prime = opts.tprime.unwrap_or(t + 1);
            UcParams { t0: 1, t, t_prime, source: StateSource::Sampler }.validate(qga.num_qubits)?;
            let target = opts.input(ell, true)?;
            let name = adversary("honest-echo");
            let adv: Box<dyn UcfsgAdversary> = match name.as_str() {
                "honest-echo" => Box::new(HonestEcho { target: target.clone() }),
                "omniscient" => Box::new(OmniscientFsgCloner { target: target.clone() }),
                other => return Err(unknown("ucfsg adversary", other, &["honest-echo", "omniscient"])),
            };
            params["ell"] = json!(ell);
            params["mode"] = json!(mode_name(mode));
            params["t"] = json!(t);
            params["tprime"] = json!(t_prime);
            params["x"] = json!(format_bits(&target));
            params["adversary"] = json!(name);
            Box::new(move || run_ucfsg_game(qga, ell, mode, adv.as_ref(), t, t_prime, trials, seed))
        }
        "attack-iqp-pru" => {
            if !matches!(qga.candidate, Candidate::IqpDiagonal { .. } | Candidate::IqpSparse { .. }) {
                return Err(CliError::Validation("attack-iqp-pru needs --candidate iqp-diagonal or iqp-sparse".into()));
            }
            if qga.num_qubits > DENSE_UNITARY_CAP {
                return Err(CliError::Validation(format!("λ ≤ {DENSE_UNITARY_CAP} for the Haar side")));
            }
            Box::new(move || attack_iqp_fixed_point(qga, trials, seed))
        }
        other => return Err(unknown("game id", other, &GAMES)),
    };
    Ok((params, job))
}

fn check_modes(modes: &[qgalab::nrprfsg::OracleMode], ell: usize) -> Result<(), CliError> {
    for &m in modes {
        if let qgalab::nrprfsg::OracleMode::Game(j) = m {
            if j > ell {
                return Err(CliError::Validation(format!("game-{j} needs j ≤ ℓ = {ell}")));
            }
        }
    }
    Ok(())
}

pub fn game(opts: &Opts) -> Result<String, CliError> {
    let qga = opts.qga()?;
    let (trials, seed) = (opts.trials()?, opts.seed());
    let (params, job) = game_job(opts, &qga, trials, seed)?;
    let start = Instant::now();
    let result = run(job())?;
    let elapsed = start.elapsed().as_millis() as u64;
    match opts.format() {
        Format::Csv => Ok(result.outcomes_csv()),
        Format::Json => {
            let mut report = result.report(opts.id.as_deref().unwrap_or_default(), params);
            if opts.timing {
                report.wall_time_ms = Some(elapsed);
            }
            pretty(&report)
        }
    }
}

pub fn ske_roundtrip(opts: &Opts) -> Result<String, CliError> {
    json_only(opts, "ske-roundtrip")?;
    let qga = opts.qga()?;
    let (trials, seed) = (opts.trials()?, opts.seed());
    let t = positive("t", opts.t.unwrap_or(8))?;
    let ell = opts.ell(4)?;
    let tree = SeedTree::new(seed);
    let (mut zero_ok, mut bits_ok, mut ones_ok) = (0, 0, 0);
    for i in 0..trials as u64 {
        let mut rng = tree.stream("ske-roundtrip", i);
        let key = run(ske_multi_keygen(&qga, t, ell, &mut rng))?;
        let zeros = vec![false; ell];
        let ct = run(ske_multi_enc(&key, &zeros, &mut rng))?;
        zero_ok += (run(ske_multi_dec(&key, &ct, &mut rng))? == zeros) as usize;
        let ct = run(ske_multi_enc(&key, &vec![true; ell], &mut rng))?;
        let decoded = run(ske_multi_dec(&key, &ct, &mut rng))?;
        let correct = decoded.iter().filter(|b| **b).count();
        bits_ok += correct;
        ones_ok += (correct == ell) as usize;
    }
    pretty(&json!({
        "command": "ske-roundtrip",
        "params": {"qga": qga_params(&qga), "t": t, "ell": ell, "trials": trials},
        "seed": seed,
        "zero_message": estimate_json(zero_ok, trials)?,
        "one_bits": estimate_json(bits_ok, trials * ell)?,
        "one_message": estimate_json(ones_ok, trials)?,
        "per_bit_bound": 1.0 - 0.8f64.powi(t as i32),
    }))
}

pub fn prfsg_eval(opts: &Opts) -> Result<String, CliError> {
    json_only(opts, "prfsg-eval")?;
    let qga = opts.qga()?;
    let seed = opts.seed();
    let ell = opts.ell(3)?;
    let mode = parse_mode(opts.mode.as_deref().unwrap_or("real"))?;
    check_modes(&[mode], ell)?;
    let inputs = match &opts.x {
        Some(_) => vec![opts.input(ell, false)?],
        None if ell <= 10 => all_inputs(ell),
        None => return Err(CliError::Validation("pass --x when ℓ > 10".into())),
    };
    let tree = SeedTree::new(seed);
    let key = run(keygen(&qga, ell, &mut tree.stream("prfsg-eval", 0)))?;
    let mut oracle = run(Oracle::open(mode, &key, &qga, tree.stream("prfsg-eval", 1)))?;
    let outputs = inputs
        .iter()
        .map(|x| Ok(json!({"x": format_bits(x), "state": run(oracle.query(x))?})))
        .collect::<Result<Vec<_>, CliError>>()?;
    pretty(&json!({
        "command": "prfsg-eval",
        "params": {"qga": qga_params(&qga), "ell": ell, "mode": mode_name(mode)},
        "seed": seed,
        "key": key,
        "outputs": outputs,
    }))
}

pub fn money_demo(opts: &Opts) -> Result<String, CliError> {
    json_only(opts, "money-demo")?;
    let qga = opts.qga()?;
    let (trials, seed) = (opts.trials()?, opts.seed());
    let tree = SeedTree::new(seed);
    let (mut honest, mut forged, mut worst) = (0, 0, 1.0f64);
    for i in 0..trials as u64 {
        let mut rng = tree.stream("money-demo", i);
        let key = run(money_keygen(&qga, &mut rng))?;
        let note = run(money_mint(&key))?;
        worst = worst.min(run(money_accept_prob(&key, &note.note))?);
        honest += run(money_verify(&key, &note.note, &mut rng))? as usize;
        let fake = run(sample_haar_state(qga.num_qubits, &mut rng))?;
        forged += run(money_verify(&key, &fake, &mut rng))? as usize;
    }
    pretty(&json!({
        "command": "money-demo",
        "params": {"qga": qga_params(&qga), "trials": trials},
        "seed": seed,
        "honest": estimate_json(honest, trials)?,
        "min_honest_accept_prob": worst,
        "haar_counterfeit": estimate_json(forged, trials)?,
        "haar_counterfeit_expected": 0.5f64.powi(qga.num_qubits as i32),
    }))
}

pub fn ega_check(opts: &Opts) -> Result<String, CliError> {
    json_only(opts, "ega-check")?;
    let ega: ExpAction = match &opts.fixture {
        Some(path) => read_json(path)?,
        None => instantiate_exp_action(opts.p.unwrap_or(23), opts.order.unwrap_or(11), opts.generator.unwrap_or(2))?,
    };
    let (trials, seed) = (opts.trials()?, opts.seed());
    let ell = opts.ell(4)?;
    let x = opts.x.as_ref().map(|_| opts.input(ell, false)).transpose()?;
    let properties = check_properties(&ega)?;
    let axioms = check_axioms(&ega)?;
    let tree = SeedTree::new(seed);
    let mut rng = tree.stream("ega-check", 0);
    let uniformity = if properties.transitive && properties.faithful {
        run(check_orbit_uniformity(&ega, trials, &mut rng))?
    } else {
        run(orbit_uniformity_statistic(&ega, trials, &mut rng))?
    };
    let key = run(nr_prf_keygen(&ega, ell, &mut tree.stream("ega-check", 1)))?;
    let inputs = match x {
        Some(x) => vec![x],
        None if ell <= 8 => all_inputs(ell),
        None => Vec::new(),
    };
    let evaluations = inputs
        .iter()
        .map(|x| Ok(json!({"x": format_bits(x), "value": run(nr_prf(&ega, &key, x))?})))
        .collect::<Result<Vec<_>, CliError>>()?;
    pretty(&json!({
        "command": "ega-check",
        "params": {"action": ega, "trials": trials, "ell": ell},
        "seed": seed,
        "properties": properties,
        "axioms_hold": axioms,
        "orbit_uniformity": uniformity,
        "nr_prf_key": key,
        "nr_prf": evaluations,
    }))
}

fn pretty<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Runtime(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
