//! The `experiment` subcommand: sweeps channel parameters and adversaries
//! over the unique codec and writes one CSV row per trial.
//!
//! Config file format, one `key = value` per line ('#' starts a comment):
//!
//! ```text
//! preset    = unique-desk        # or unique-small / custom
//! field_bits = 16                # custom preset only
//! n         = 200
//! k         = 120
//! delta_design = 0.25
//! trials    = 10
//! seed      = 42
//! delta_del = 0.0, 0.1, 0.25     # swept
//! gamma_ins = 0.0                # swept
//! adversary = random, least-frequent, burst
//! ```
//!
//! CSV columns: trial, n, delta_del, gamma_ins, eps, adversary,
//! incorrect_guesses, undetermined, erasures, decoded_ok, wall_ms, seed.
//! Without --wall-clock the wall_ms column is fixed at 0 so CSVs are
//! byte-identical across runs with the same seed.

use std::collections::HashMap;
use std::path::Path;
use std::time::Instant;

use insdel::channel::{
    apply, burst_deletion_attack, least_frequent_attack, random_adversary, Budget,
};
use insdel::codec::{score_guesses, IndexedWord, UniqueCodec};
use insdel::seed::{derive_seed, rng_from_seed};
use rand::Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::Failure;

#[derive(Debug, Clone)]
struct Config {
    field_bits: u32,
    n: usize,
    k: usize,
    delta_design: f64,
    trials: u64,
    seed: u64,
    delta_del: Vec<f64>,
    gamma_ins: Vec<f64>,
    adversaries: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        // unique-desk
        Config {
            field_bits: 16,
            n: 200,
            k: 120,
            delta_design: 0.25,
            trials: 10,
            seed: 0,
            delta_del: vec![0.1],
            gamma_ins: vec![0.0],
            adversaries: vec!["random".into()],
        }
    }
}

fn parse_list<T: std::str::FromStr>(value: &str, key: &str) -> Result<Vec<T>, Failure> {
    value
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|_| Failure::usage(format!("bad value {part:?} for {key}")))
        })
        .collect()
}

fn parse_config(contents: &str) -> Result<Config, Failure> {
    let mut pairs: HashMap<String, String> = HashMap::new();
    for (idx, raw) in contents.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Failure::usage(format!(
                "config line {}: expected key = value",
                idx + 1
            )));
        };
        pairs.insert(key.trim().to_string(), value.trim().to_string());
    }

    let mut config = match pairs.remove("preset").as_deref() {
        None | Some("unique-desk") => Config::default(),
        Some("unique-small") => Config {
            field_bits: 8,
            n: 60,
            k: 40,
            delta_design: 0.12,
            ..Config::default()
        },
        Some("custom") => Config::default(),
        Some(other) => {
            return Err(Failure::usage(format!(
                "unknown preset {other:?} (expected unique-desk, unique-small, custom)"
            )))
        }
    };

    for (key, value) in pairs {
        match key.as_str() {
            "field_bits" => config.field_bits = parse_list(&value, &key)?[0],
            "n" => config.n = parse_list(&value, &key)?[0],
            "k" => config.k = parse_list(&value, &key)?[0],
            "delta_design" => config.delta_design = parse_list(&value, &key)?[0],
            "trials" => config.trials = parse_list(&value, &key)?[0],
            "seed" => config.seed = parse_list(&value, &key)?[0],
            "delta_del" => config.delta_del = parse_list(&value, &key)?,
            "gamma_ins" => config.gamma_ins = parse_list(&value, &key)?,
            "adversary" => {
                config.adversaries = value.split(',').map(|s| s.trim().to_string()).collect()
            }
            other => return Err(Failure::usage(format!("unknown config key {other:?}"))),
        }
    }
    if config.trials == 0 {
        return Err(Failure::usage("trials must be at least 1"));
    }
    for a in &config.adversaries {
        if !matches!(a.as_str(), "random" | "least-frequent" | "burst") {
            return Err(Failure::usage(format!("unknown adversary {a:?}")));
        }
    }
    Ok(config)
}

struct TrialSpec {
    adversary: String,
    delta_del: f64,
    gamma_ins: f64,
    trial: u64,
    seed: u64,
}

struct TrialRow {
    spec: TrialSpec,
    incorrect: usize,
    undetermined: usize,
    erasures: usize,
    decoded_ok: bool,
    wall_ms: u64,
}

fn run_trial(codec: &UniqueCodec, spec: &TrialSpec, wall_clock: bool) -> Result<TrialRow, Failure> {
    let start = Instant::now();
    let mut rng = rng_from_seed(derive_seed(spec.seed, 1));
    let field = 1u32 << codec.rs().field().bits();
    let msg: Vec<u32> = (0..codec.k()).map(|_| rng.random_range(0..field)).collect();
    let word = codec
        .encode(&msg)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let (stream, alphabet) = word
        .to_channel_stream()
        .map_err(|e| Failure::usage(e.to_string()))?;
    let budget = Budget::new(spec.delta_del, spec.gamma_ins)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let script = match spec.adversary.as_str() {
        "random" => random_adversary(stream.len(), alphabet, &budget, derive_seed(spec.seed, 2)),
        "least-frequent" => least_frequent_attack(&stream, alphabet, &budget),
        "burst" => burst_deletion_attack(stream.len(), &budget, derive_seed(spec.seed, 2)),
        _ => unreachable!("validated in parse_config"),
    };
    let result = apply(&script, &stream).map_err(|e| Failure::usage(e.to_string()))?;
    let received = IndexedWord::from_channel_stream(&result.output, word.q_msg(), word.q_idx())
        .map_err(|e| Failure::usage(e.to_string()))?;
    let detail = codec.decode(&received);
    let score = score_guesses(&detail.guesses, &result.survivors);
    let decoded_ok = detail.outcome.map(|m| m == msg).unwrap_or(false);
    let wall_ms = if wall_clock {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    Ok(TrialRow {
        spec: TrialSpec {
            adversary: spec.adversary.clone(),
            ..*spec
        },
        incorrect: score.incorrect,
        undetermined: score.undetermined,
        erasures: detail.reconstructed.erasures(),
        decoded_ok,
        wall_ms,
    })
}

impl TrialSpec {
    fn clone_shallow(&self) -> TrialSpec {
        TrialSpec {
            adversary: self.adversary.clone(),
            delta_del: self.delta_del,
            gamma_ins: self.gamma_ins,
            trial: self.trial,
            seed: self.seed,
        }
    }
}

pub fn run(config_path: &Path, out: &Path, wall_clock: bool) -> Result<(), Failure> {
    let contents = std::fs::read_to_string(config_path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", config_path.display())))?;
    let config = parse_config(&contents)?;

    let codec = UniqueCodec::new(
        config.field_bits,
        config.n,
        config.k,
        config.delta_design,
        config.seed,
    )
    .map_err(|e| Failure::usage(e.to_string()))?;

    let mut specs = Vec::new();
    let mut combo = 0u64;
    for adversary in &config.adversaries {
        for &delta_del in &config.delta_del {
            for &gamma_ins in &config.gamma_ins {
                for trial in 0..config.trials {
                    specs.push(TrialSpec {
                        adversary: adversary.clone(),
                        delta_del,
                        gamma_ins,
                        trial,
                        seed: derive_seed(config.seed, (combo << 32) | trial),
                    });
                }
                combo += 1;
            }
        }
    }

    let runner = |spec: &TrialSpec| run_trial(&codec, spec, wall_clock);

    #[cfg(feature = "parallel")]
    let rows: Result<Vec<TrialRow>, Failure> = specs
        .par_iter()
        .map(|s| runner(&s.clone_shallow()))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Result<Vec<TrialRow>, Failure> = specs.iter().map(|s| runner(&s.clone_shallow())).collect();
    let rows = rows?;

    let mut csv = String::from(
        "trial,n,delta_del,gamma_ins,eps,adversary,incorrect_guesses,undetermined,erasures,decoded_ok,wall_ms,seed\n",
    );
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.spec.trial,
            config.n,
            row.spec.delta_del,
            row.spec.gamma_ins,
            codec.params().eps,
            row.spec.adversary,
            row.incorrect,
            row.undetermined,
            row.erasures,
            u8::from(row.decoded_ok),
            row.wall_ms,
            row.spec.seed,
        ));
    }
    std::fs::write(out, csv)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", out.display())))?;
    println!("experiment: wrote {} rows over {} combos", rows.len(), combo);
    Ok(())
}
