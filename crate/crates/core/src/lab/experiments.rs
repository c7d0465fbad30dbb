use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::config::LabConfig;
use super::lemmas::{monte_carlo_success_prob, verify_lemma_conditional_with_cap, verify_lemma_ratio_with_cap, LemmaReport, Side};
use super::prob::{hoeffding_half_width, hoeffding_samples, verdict_le, Verdict};
use super::theorem::{exact_bottom_prob, measure_theorem_error, measure_trivial_sampler, run_solver};
use crate::avoid::{choose_params, ParamMode};
use crate::circuit::families::{conjunction_flag, duplicator, stretched_duplicator, xor_chain};
use crate::circuit::{random_circuit, Circuit};
use crate::error::{Error, Result};
use crate::inverters::InverterSpec;
use crate::seed::{self, Stream};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub seed: u64,
    pub circuit: Circuit,
}

/// Fixed-seed random circuits: `per_cell` for every `(n, gates)` pair, with
/// `m = n + stretch`. Ids look like `c-n2-g4-07`.
pub fn generate_corpus(cfg: &LabConfig) -> Result<Vec<CorpusEntry>> {
    let mut cells = Vec::new();
    for &n in &cfg.corpus_inputs {
        for &g in &cfg.corpus_gates {
            for i in 0..cfg.corpus_per_cell {
                cells.push((n, g, i));
            }
        }
    }
    cells
        .into_iter()
        .enumerate()
        .map(|(index, (n, g, i))| {
            let seed = seed::derive(cfg.corpus_seed, Stream::Corpus, index as u64);
            let id = format!("c-n{n}-g{g}-{i:02}");
            let circuit = random_circuit(n, n + cfg.corpus_stretch, g, seed)?.with_name(id.clone())?;
            Ok(CorpusEntry { id, seed, circuit })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    LemmaRatio,
    LemmaConditional,
    Soundness,
    TheoremError,
    TrivialSampler,
    Amplifier,
    All,
}

impl Experiment {
    pub const NAMES: [&'static str; 7] = [
        "lemma-ratio",
        "lemma-conditional",
        "soundness",
        "theorem-error",
        "trivial-sampler",
        "amplifier",
        "all",
    ];

    fn parts(self) -> Vec<Experiment> {
        use Experiment::*;
        match self {
            All => vec![LemmaRatio, LemmaConditional, Soundness, TheoremError, TrivialSampler, Amplifier],
            one => vec![one],
        }
    }

    fn name(self) -> &'static str {
        use Experiment::*;
        let i = match self {
            LemmaRatio => 0,
            LemmaConditional => 1,
            Soundness => 2,
            TheoremError => 3,
            TrivialSampler => 4,
            Amplifier => 5,
            All => 6,
        };
        Self::NAMES[i]
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use Experiment::*;
        [LemmaRatio, LemmaConditional, Soundness, TheoremError, TrivialSampler, Amplifier, All]
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                Error::param(format!("unknown experiment `{s}` (expected one of {})", Self::NAMES.join(", ")))
            })
    }
}

/// One CSV line. Lemma rows put the left side in `error_rate` and the
/// (scaled) right side in `bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub experiment: &'static str,
    pub circuit_id: String,
    pub n: usize,
    pub m: usize,
    pub inverter: String,
    pub epsilon: Option<f64>,
    pub t: Option<usize>,
    pub trials: u64,
    pub found_valid: Option<u64>,
    pub found_invalid: Option<u64>,
    pub bottom: Option<u64>,
    pub error_rate: f64,
    pub bound: f64,
    pub holds: &'static str,
    pub seed: Option<u64>,
}

pub const CSV_HEADER: &str =
    "experiment,circuit_id,n,m,inverter,epsilon,t,trials,found_valid,found_invalid,bottom,error_rate,bound,holds,seed";

fn lemma_row(experiment: &'static str, c: &Circuit, seed: u64, r: LemmaReport) -> Row {
    Row {
        experiment,
        circuit_id: r.circuit_id,
        n: c.n(),
        m: c.m(),
        inverter: r.spec,
        epsilon: None,
        t: None,
        trials: r.lhs.samples,
        found_valid: None,
        found_invalid: None,
        bottom: None,
        error_rate: r.lhs.value,
        bound: r.rhs.value,
        holds: r.verdict.as_str(),
        seed: Some(seed),
    }
}

fn lemma_rows(cfg: &LabConfig, conditional: bool) -> Result<Vec<Row>> {
    let corpus = generate_corpus(cfg)?;
    let jobs: Vec<(&CorpusEntry, &InverterSpec)> = corpus
        .iter()
        .flat_map(|e| cfg.lemma_inverters.iter().map(move |s| (e, s)))
        .collect();
    jobs.into_par_iter()
        .map(|(e, spec)| {
            if conditional {
                let r = verify_lemma_conditional_with_cap(spec, &e.circuit, cfg.exact_cap)?;
                Ok(lemma_row("lemma-conditional", &e.circuit, e.seed, r))
            } else {
                let r = verify_lemma_ratio_with_cap(spec, &e.circuit, cfg.exact_cap)?;
                Ok(lemma_row("lemma-ratio", &e.circuit, e.seed, r))
            }
        })
        .collect()
}

/// Perfect inverter over the corpus plus injective circuits at `t = n`. A row
/// holds when no image point was returned and the error rate is within the
/// half-width of the exact bottom probability.
fn soundness_rows(cfg: &LabConfig) -> Result<Vec<Row>> {
    let n = cfg.injective_inputs;
    let mut circuits: Vec<Circuit> = generate_corpus(cfg)?.into_iter().map(|e| e.circuit).collect();
    circuits.push(duplicator(n));
    circuits.push(xor_chain(n));
    let spec = InverterSpec::Perfect;
    circuits
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let seed = seed::derive(cfg.master_seed, Stream::Cell, i as u64);
            let params = choose_params(cfg.epsilon_prime, c.n(), ParamMode::Theorem, seed)?;
            let counts = run_solver(c, &params, &spec, cfg.soundness_runs)?;
            let hw = hoeffding_half_width(cfg.soundness_runs, cfg.delta);
            let expected = exact_bottom_prob(&spec, c, params.t)?;
            let rate = counts.error_rate();
            let holds = counts.found_invalid == 0 && (rate - expected).abs() <= hw;
            Ok(Row {
                experiment: "soundness",
                circuit_id: c.name().to_string(),
                n: c.n(),
                m: c.m(),
                inverter: spec.to_string(),
                epsilon: Some(params.epsilon),
                t: Some(params.t),
                trials: counts.total(),
                found_valid: Some(counts.found_valid),
                found_invalid: Some(counts.found_invalid),
                bottom: Some(counts.bottom),
                error_rate: rate,
                bound: expected + hw,
                holds: if holds { "true" } else { "false" },
                seed: Some(seed),
            })
        })
        .collect()
}

fn theorem_rows(cfg: &LabConfig) -> Result<Vec<Row>> {
    cfg.theorem_inputs
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let c = duplicator(n);
            let seed = seed::derive(cfg.master_seed, Stream::Cell, 1000 + i as u64);
            let params = choose_params(cfg.epsilon_prime, n, ParamMode::Theorem, seed)?;
            let r = measure_theorem_error(&c, &params, &cfg.theorem_inverter, cfg.theorem_runs, cfg.delta)?;
            Ok(Row {
                experiment: "theorem-error",
                circuit_id: r.circuit_id.clone(),
                n: c.n(),
                m: c.m(),
                inverter: r.spec.clone(),
                epsilon: Some(params.epsilon),
                t: Some(params.t),
                trials: r.counts.total(),
                found_valid: Some(r.counts.found_valid),
                found_invalid: Some(r.counts.found_invalid),
                bottom: Some(r.counts.bottom),
                error_rate: r.error_rate(),
                bound: r.bound,
                holds: if r.holds() { "true" } else { "false" },
                seed: Some(seed),
            })
        })
        .collect()
}

fn trivial_rows(cfg: &LabConfig) -> Result<Vec<Row>> {
    let samples = hoeffding_samples(cfg.tau, cfg.delta)?;
    cfg.trivial_stretches
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let c = stretched_duplicator(cfg.trivial_inputs, k);
            let seed = seed::derive(cfg.master_seed, Stream::Cell, 2000 + i as u64);
            let est = measure_trivial_sampler(&c, samples, cfg.delta, seed)?;
            let valid = (est.value * samples as f64).round() as u64;
            let miss = 1.0 - est.value;
            let bound = 2f64.powi(-(k as i32)) + est.half_width;
            Ok(Row {
                experiment: "trivial-sampler",
                circuit_id: c.name().to_string(),
                n: c.n(),
                m: c.m(),
                inverter: "none".to_string(),
                epsilon: None,
                t: Some(1),
                trials: samples,
                found_valid: Some(valid),
                found_invalid: Some(samples - valid),
                bottom: Some(0),
                error_rate: miss,
                bound,
                holds: if miss <= bound { "true" } else { "false" },
                seed: Some(seed),
            })
        })
        .collect()
}

/// Amplified inverter on uniformly drawn image points; `bound` is the error
/// target `ε`, and the row holds once the failure rate clears it by the
/// half-width.
fn amplifier_rows(cfg: &LabConfig) -> Result<Vec<Row>> {
    let c = conjunction_flag(cfg.amplifier_inputs);
    let eps = cfg.amplifier_epsilon;
    let spec = cfg.amplifier_inverter.resolve(&c, eps)?;
    let samples = hoeffding_samples(cfg.tau, cfg.delta)?;
    let seed = seed::derive(cfg.master_seed, Stream::Cell, 3000);
    let est = monte_carlo_success_prob(&spec, &c, Side::OverX, eps, samples, cfg.delta, seed)?;
    let successes = (est.value * samples as f64).round() as u64;
    let failure = 1.0 - est.value;
    let t = match &spec {
        InverterSpec::Amplified { repetitions, .. } => *repetitions,
        _ => None,
    };
    Ok(vec![Row {
        experiment: "amplifier",
        circuit_id: c.name().to_string(),
        n: c.n(),
        m: c.m(),
        inverter: spec.to_string(),
        epsilon: Some(eps),
        t,
        trials: samples,
        found_valid: Some(successes),
        found_invalid: Some(samples - successes),
        bottom: None,
        error_rate: failure,
        bound: eps,
        holds: verdict_le(failure, eps, est.half_width).as_str(),
        seed: Some(seed),
    }])
}

/// Rows for `experiment`, in a fixed order independent of scheduling.
pub fn run_experiment(experiment: Experiment, cfg: &LabConfig) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for part in experiment.parts() {
        rows.extend(match part {
            Experiment::LemmaRatio => lemma_rows(cfg, false)?,
            Experiment::LemmaConditional => lemma_rows(cfg, true)?,
            Experiment::Soundness => soundness_rows(cfg)?,
            Experiment::TheoremError => theorem_rows(cfg)?,
            Experiment::TrivialSampler => trivial_rows(cfg)?,
            Experiment::Amplifier => amplifier_rows(cfg)?,
            Experiment::All => unreachable!("All expands to its parts"),
        });
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Unsupported(format!("cannot write CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(',')).map_err(io)?;
    }
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Unsupported(format!("cannot write CSV: {e}")))
}

/// `true` when every row's inequality held.
pub fn all_hold(rows: &[Row]) -> bool {
    rows.iter().all(|r| r.holds == Verdict::Holds.as_str())
}
