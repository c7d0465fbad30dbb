//! Solving Range Avoidance with an inverter.
//!
//! [`solve_avoid`] draws up to `t` uniform strings `y ∈ {0,1}ᵐ` and returns the
//! first one the inverter fails to invert. A sound inverter never succeeds
//! off the image, so the only ways to go wrong are returning an image point
//! the inverter happened to miss, or exhausting all `t` draws (⊥).

use std::fmt;

use crate::circuit::{BitString, Circuit};
use crate::error::{Error, Result};
use crate::inverters::{invert, InverterSpec};
use crate::oracles::image_contains;
use crate::seed::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvoidParams {
    /// Error target handed to the inverter on every call.
    pub epsilon: f64,
    /// Maximum number of draws.
    pub t: usize,
    pub seed: u64,
}

impl AvoidParams {
    pub fn new(epsilon: f64, t: usize, seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::param(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        if t == 0 {
            return Err(Error::param("t must be at least 1"));
        }
        Ok(AvoidParams { epsilon, t, seed })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        AvoidParams { seed, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamMode {
    /// `t = n`, `ε = ε′/(2n)`.
    Theorem,
    /// `t = n`, `ε = 1/(8·p)` for a machine making at most `p` queries.
    Corollary { query_bound: u64 },
}

impl std::str::FromStr for ParamMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "theorem" => Ok(ParamMode::Theorem),
            Some(("corollary", p)) => {
                let query_bound: u64 = p
                    .parse()
                    .map_err(|_| Error::param(format!("invalid query bound `{p}`")))?;
                if query_bound == 0 {
                    return Err(Error::param("query bound must be positive"));
                }
                Ok(ParamMode::Corollary { query_bound })
            }
            _ => Err(Error::param(format!(
                "unknown mode `{s}` (expected theorem or corollary:P)"
            ))),
        }
    }
}

/// Parameters that bring the total failure probability `ε·t + 2⁻ᵗ` under
/// `epsilon_prime` (theorem mode, once `2⁻ⁿ ≤ ε′/2`), or that make each of
/// `p` queries fail with probability at most `1/(8p)` (corollary mode).
pub fn choose_params(epsilon_prime: f64, n: usize, mode: ParamMode, seed: u64) -> Result<AvoidParams> {
    if !(epsilon_prime > 0.0 && epsilon_prime < 1.0) {
        return Err(Error::param(format!(
            "epsilon_prime must lie in (0, 1), got {epsilon_prime}"
        )));
    }
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    let epsilon = match mode {
        ParamMode::Theorem => epsilon_prime / (2 * n) as f64,
        ParamMode::Corollary { query_bound } => {
            if query_bound == 0 {
                return Err(Error::param("query bound must be positive"));
            }
            1.0 / (8.0 * query_bound as f64)
        }
    };
    AvoidParams::new(epsilon, n, seed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AvoidOutcome {
    Found(BitString),
    Bottom,
}

impl fmt::Display for AvoidOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AvoidOutcome::Found(y) => write!(f, "FOUND {y}"),
            AvoidOutcome::Bottom => write!(f, "BOTTOM"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub y: BitString,
    pub inverted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvoidResult {
    pub outcome: AvoidOutcome,
    pub iterations_used: usize,
    pub transcript: Vec<TranscriptEntry>,
}

impl AvoidResult {
    /// One `ITER <i> <y> <INVERTED|FAILED>` line per iteration.
    pub fn transcript_lines(&self) -> Vec<String> {
        self.transcript
            .iter()
            .enumerate()
            .map(|(i, e)| {
                format!(
                    "ITER {} {} {}",
                    i + 1,
                    e.y,
                    if e.inverted { "INVERTED" } else { "FAILED" }
                )
            })
            .collect()
    }
}

pub(crate) fn check_instance(c: &Circuit) -> Result<()> {
    if c.m() <= c.n() {
        return Err(Error::NotAvoidInstance {
            inputs: c.n(),
            outputs: c.m(),
        });
    }
    Ok(())
}

pub fn solve_avoid(c: &Circuit, params: &AvoidParams, spec: &InverterSpec) -> Result<AvoidResult> {
    check_instance(c)?;
    let params = AvoidParams::new(params.epsilon, params.t, params.seed)?;
    let spec = spec.resolve(c, params.epsilon)?;
    let mut transcript = Vec::with_capacity(params.t);
    for i in 0..params.t as u64 {
        let mut draw = seed::rng(seed::derive(params.seed, Stream::AvoidDraw, i));
        let y = BitString::random(c.m(), &mut draw);
        let tau = seed::derive(params.seed, Stream::AvoidTau, i);
        let out = invert(&spec, c, &y, params.epsilon, tau)?;
        transcript.push(TranscriptEntry {
            y: y.clone(),
            inverted: out.success,
        });
        if !out.success {
            return Ok(AvoidResult {
                outcome: AvoidOutcome::Found(y),
                iterations_used: transcript.len(),
                transcript,
            });
        }
    }
    Ok(AvoidResult {
        outcome: AvoidOutcome::Bottom,
        iterations_used: transcript.len(),
        transcript,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialSample {
    pub y: BitString,
    /// Whether `y ∉ Image(c)`, checked with the exact image oracle.
    pub valid: bool,
}

/// One uniform draw from `{0,1}ᵐ`, flagged with its validity.
pub fn trivial_sample(c: &Circuit, seed: u64) -> Result<TrivialSample> {
    check_instance(c)?;
    let y = BitString::random(c.m(), &mut seed::rng(seed));
    let valid = !image_contains(c, &y)?;
    Ok(TrivialSample { y, valid })
}
