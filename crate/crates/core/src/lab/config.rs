use std::collections::HashSet;
use std::fmt::Display;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::inverters::InverterSpec;

/// Experiment configuration, read from `key = value` lines. `#` starts a
/// comment; unknown and repeated keys are errors; missing keys keep their
/// defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct LabConfig {
    pub master_seed: u64,
    pub corpus_seed: u64,
    pub corpus_inputs: Vec<usize>,
    pub corpus_gates: Vec<usize>,
    pub corpus_per_cell: usize,
    /// `m − n` for corpus circuits.
    pub corpus_stretch: usize,
    pub lemma_inverters: Vec<InverterSpec>,
    /// Largest `m` the exact enumeration path accepts.
    pub exact_cap: usize,
    pub delta: f64,
    /// Target Hoeffding half-width for sampled experiments.
    pub tau: f64,
    pub epsilon_prime: f64,
    pub soundness_runs: u64,
    pub injective_inputs: usize,
    pub theorem_inputs: Vec<usize>,
    pub theorem_inverter: InverterSpec,
    pub theorem_runs: u64,
    pub trivial_inputs: usize,
    pub trivial_stretches: Vec<usize>,
    pub amplifier_inputs: usize,
    pub amplifier_inverter: InverterSpec,
    pub amplifier_epsilon: f64,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            master_seed: 20_240_601,
            corpus_seed: 1,
            corpus_inputs: vec![2, 3],
            corpus_gates: vec![2, 4, 6],
            corpus_per_cell: 25,
            corpus_stretch: 1,
            lemma_inverters: vec![
                InverterSpec::Perfect,
                InverterSpec::Lex { probes: 1 },
                InverterSpec::Lex { probes: 2 },
            ],
            exact_cap: super::lemmas::DEFAULT_EXACT_CAP,
            delta: 0.01,
            tau: 0.02,
            epsilon_prime: 0.1,
            soundness_runs: 1000,
            injective_inputs: 8,
            theorem_inputs: vec![4, 8],
            theorem_inverter: InverterSpec::Bounded { probes: 2 },
            theorem_runs: 10_000,
            trivial_inputs: 4,
            trivial_stretches: vec![1, 2, 3],
            amplifier_inputs: 8,
            amplifier_inverter: InverterSpec::Amplified {
                inner: Box::new(InverterSpec::Bounded { probes: 1 }),
                repetitions: None,
                attempts: None,
            },
            amplifier_epsilon: 0.1,
        }
    }
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: Display,
{
    value
        .parse()
        .map_err(|e| Error::param(format!("bad value `{value}` for `{key}`: {e}")))
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: Display,
{
    let items = value
        .split(',')
        .map(|v| scalar(key, v.trim()))
        .collect::<Result<Vec<T>>>()?;
    if items.is_empty() {
        return Err(Error::param(format!("`{key}` needs at least one value")));
    }
    Ok(items)
}

fn probability(key: &str, value: &str) -> Result<f64> {
    let p: f64 = scalar(key, value)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param(format!("`{key}` must lie in (0, 1), got {value}")));
    }
    Ok(p)
}

fn positive<T: FromStr + PartialOrd + Default>(key: &str, value: &str) -> Result<T>
where
    T::Err: Display,
{
    let v: T = scalar(key, value)?;
    if v <= T::default() {
        return Err(Error::param(format!("`{key}` must be positive, got {value}")));
    }
    Ok(v)
}

impl LabConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = LabConfig::default();
        let mut seen = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: Error| Error::param(format!("config line {}: {}", idx + 1, strip_prefix(&e)));
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| at(Error::param(format!("expected key = value, got `{line}`"))))?;
            if !seen.insert(key.to_string()) {
                return Err(at(Error::param(format!("duplicate key `{key}`"))));
            }
            cfg.set(key, value).map_err(at)?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "master_seed" => self.master_seed = scalar(key, v)?,
            "corpus_seed" => self.corpus_seed = scalar(key, v)?,
            "corpus_inputs" => self.corpus_inputs = list(key, v)?,
            "corpus_gates" => self.corpus_gates = list(key, v)?,
            "corpus_per_cell" => self.corpus_per_cell = positive(key, v)?,
            "corpus_stretch" => self.corpus_stretch = positive(key, v)?,
            "lemma_inverters" => self.lemma_inverters = list(key, v)?,
            "exact_cap" => self.exact_cap = positive(key, v)?,
            "delta" => self.delta = probability(key, v)?,
            "tau" => self.tau = probability(key, v)?,
            "epsilon_prime" => self.epsilon_prime = probability(key, v)?,
            "soundness_runs" => self.soundness_runs = positive(key, v)?,
            "injective_inputs" => self.injective_inputs = positive(key, v)?,
            "theorem_inputs" => self.theorem_inputs = list(key, v)?,
            "theorem_inverter" => self.theorem_inverter = scalar(key, v)?,
            "theorem_runs" => self.theorem_runs = positive(key, v)?,
            "trivial_inputs" => self.trivial_inputs = positive(key, v)?,
            "trivial_stretches" => self.trivial_stretches = list(key, v)?,
            "amplifier_inputs" => self.amplifier_inputs = positive(key, v)?,
            "amplifier_inverter" => self.amplifier_inverter = scalar(key, v)?,
            "amplifier_epsilon" => self.amplifier_epsilon = probability(key, v)?,
            _ => return Err(Error::param(format!("unknown key `{key}`"))),
        }
        if key.ends_with("_inputs") || key.ends_with("_stretches") {
            let bad = match key {
                "corpus_inputs" => self.corpus_inputs.contains(&0),
                "theorem_inputs" => self.theorem_inputs.contains(&0),
                "trivial_stretches" => self.trivial_stretches.contains(&0),
                _ => false,
            };
            if bad {
                return Err(Error::param(format!("`{key}` entries must be positive")));
            }
        }
        Ok(())
    }

    /// Corpus circuits, `|inputs| · |gates| · per_cell` in total.
    pub fn corpus_size(&self) -> usize {
        self.corpus_inputs.len() * self.corpus_gates.len() * self.corpus_per_cell
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::InvalidParameter(msg) => msg.clone(),
        other => other.to_string(),
    }
}

impl FromStr for LabConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LabConfig::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_describe_the_standard_corpus() {
        let cfg = LabConfig::parse("").unwrap();
        assert_eq!(cfg, LabConfig::default());
        assert_eq!(cfg.corpus_size(), 150);
    }

    #[test]
    fn overrides_and_comments() {
        let cfg = LabConfig::parse(
            "# lab settings\nmaster_seed = 9\ncorpus_inputs = 2\n\nlemma_inverters = perfect, bounded:3 # trailing\ndelta=0.05\n",
        )
        .unwrap();
        assert_eq!(cfg.master_seed, 9);
        assert_eq!(cfg.corpus_inputs, vec![2]);
        assert_eq!(cfg.lemma_inverters, vec![InverterSpec::Perfect, InverterSpec::Bounded { probes: 3 }]);
        assert_eq!(cfg.delta, 0.05);
    }

    #[test]
    fn rejects_bad_lines() {
        for (text, needle) in [
            ("colour = blue", "unknown key"),
            ("delta = 0.1\ndelta = 0.2", "duplicate"),
            ("delta = 1.5", "(0, 1)"),
            ("runs", "key = value"),
            ("corpus_per_cell = 0", "positive"),
            ("corpus_inputs = 2,0", "positive"),
            ("theorem_inverter = magic", "bad value"),
        ] {
            let err = LabConfig::parse(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text}: {err}");
            assert!(err.contains("config line"), "{err}");
        }
    }
}
