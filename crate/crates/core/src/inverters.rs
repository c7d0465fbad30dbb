//! Inverters: randomized procedures that, given `C` and `y`, try to output a
//! preimage of `y`.
//!
//! The weak inverters here (`bounded`, `lex`) stand in for an inverter with a
//! small but known success rate; `perfect` is exhaustive search; `amplified`
//! turns a weak inverter into a strong one by running it on the direct
//! product of `C` with the target planted in a random block.
//!
//! Every [`InversionOutcome`] recomputes its success flag from the candidate:
//! an inverter can never report success on a string outside the image.

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::circuit::{product_circuit, BitString, Circuit, Component};
use crate::error::{CapacityError, Error, Result};
use crate::oracles::{ImageProfile, DEFAULT_ENUMERATION_CAP};
use crate::seed::{self, Stream};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum InverterSpec {
    /// Exhaustive preimage search.
    Perfect,
    /// `probes` inputs drawn uniformly with replacement.
    Bounded { probes: u64 },
    /// The first `probes` inputs in lexicographic order; ignores randomness.
    Lex { probes: u64 },
    /// Direct-product amplification of a non-amplified inner inverter.
    /// `None` fields take their defaults from the circuit and `ε`.
    Amplified {
        inner: Box<InverterSpec>,
        repetitions: Option<usize>,
        attempts: Option<u64>,
    },
}

impl InverterSpec {
    pub fn bounded(probes: u64) -> Result<Self> {
        if probes == 0 {
            return Err(Error::param("bounded inverter needs at least one probe"));
        }
        Ok(InverterSpec::Bounded { probes })
    }

    pub fn lex(probes: u64) -> Result<Self> {
        if probes == 0 {
            return Err(Error::param("lex inverter needs at least one probe"));
        }
        Ok(InverterSpec::Lex { probes })
    }

    pub fn amplified(inner: InverterSpec, repetitions: Option<usize>, attempts: Option<u64>) -> Result<Self> {
        if matches!(inner, InverterSpec::Amplified { .. }) {
            return Err(Error::param("amplified inverters cannot be nested"));
        }
        if repetitions == Some(0) || attempts == Some(0) {
            return Err(Error::param("amplified inverter needs t_rep ≥ 1 and attempts ≥ 1"));
        }
        Ok(InverterSpec::Amplified {
            inner: Box::new(inner),
            repetitions,
            attempts,
        })
    }

    /// Deterministic specs give the same outcome for every `tau`.
    pub fn is_deterministic(&self) -> bool {
        matches!(self, InverterSpec::Perfect | InverterSpec::Lex { .. })
    }

    /// Fills in amplifier defaults for circuit `c` and error target `epsilon`;
    /// other specs are returned unchanged.
    pub fn resolve(&self, c: &Circuit, epsilon: f64) -> Result<InverterSpec> {
        match self {
            InverterSpec::Amplified {
                inner,
                repetitions,
                attempts,
            } if repetitions.is_none() || attempts.is_none() => {
                check_epsilon(epsilon)?;
                let t_rep = repetitions.unwrap_or_else(|| default_repetitions(c.n(), epsilon));
                let attempts = match attempts {
                    Some(a) => *a,
                    None => {
                        let p = product_success_estimate(inner, c, t_rep)?;
                        default_attempts(t_rep, epsilon, p)?
                    }
                };
                InverterSpec::amplified((**inner).clone(), Some(t_rep), Some(attempts))
            }
            other => Ok(other.clone()),
        }
    }
}

impl fmt::Display for InverterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InverterSpec::Perfect => write!(f, "perfect"),
            InverterSpec::Bounded { probes } => write!(f, "bounded:{probes}"),
            InverterSpec::Lex { probes } => write!(f, "lex:{probes}"),
            InverterSpec::Amplified {
                inner,
                repetitions,
                attempts,
            } => {
                let show = |v: Option<String>| v.unwrap_or_else(|| "auto".to_string());
                write!(
                    f,
                    "amplified:{inner}:{}:{}",
                    show(repetitions.map(|t| t.to_string())),
                    show(attempts.map(|a| a.to_string()))
                )
            }
        }
    }
}

fn count_field<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::param(format!("invalid {what} `{s}` in inverter spec")))
}

fn auto_field<T: FromStr>(s: &str, what: &str) -> Result<Option<T>> {
    if s == "auto" {
        Ok(None)
    } else {
        count_field(s, what).map(Some)
    }
}

impl FromStr for InverterSpec {
    type Err = Error;

    /// `perfect`, `bounded:R`, `lex:R`, `amplified:INNER:T:A` (`T` and `A`
    /// may be `auto`; `amplified:INNER` means both are `auto`).
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["perfect"] => Ok(InverterSpec::Perfect),
            ["bounded", r] => InverterSpec::bounded(count_field(r, "probe count")?),
            ["lex", r] => InverterSpec::lex(count_field(r, "probe count")?),
            ["amplified", rest @ ..] if !rest.is_empty() => {
                let (inner, t, a) = match rest.len() {
                    1 | 2 => (rest.join(":"), None, None),
                    _ => {
                        let k = rest.len();
                        (
                            rest[..k - 2].join(":"),
                            auto_field(rest[k - 2], "repetition count")?,
                            auto_field(rest[k - 1], "attempt count")?,
                        )
                    }
                };
                InverterSpec::amplified(inner.parse()?, t, a)
            }
            _ => Err(Error::param(format!("unrecognized inverter spec `{s}`"))),
        }
    }
}

/// Result of one inversion attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionOutcome {
    /// Present only if it really is a preimage of the target.
    pub candidate: Option<BitString>,
    /// The success event; equals `candidate.is_some()`.
    pub success: bool,
    pub probes_used: u64,
    pub tau: u64,
}

impl InversionOutcome {
    fn checked(c: &Circuit, y: &BitString, candidate: Option<BitString>, probes_used: u64, tau: u64) -> Self {
        let candidate = candidate.filter(|x| {
            let mut scratch = Vec::new();
            x.len() == c.n() && c.maps_to(x.bits(), y.bits(), &mut scratch)
        });
        InversionOutcome {
            success: candidate.is_some(),
            candidate,
            probes_used,
            tau,
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

/// `⌈4n/ε⌉`.
pub fn default_repetitions(n: usize, epsilon: f64) -> usize {
    ((4 * n) as f64 / epsilon).ceil().max(1.0) as usize
}

/// `⌈t_rep · ln(3/ε) / p⌉` where `p` is the inner inverter's per-call success
/// on random images of the product circuit.
pub fn default_attempts(t_rep: usize, epsilon: f64, p: f64) -> Result<u64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::param(
            "the inner inverter never succeeds on product images; give the attempt count explicitly",
        ));
    }
    let a = (t_rep as f64 * (3.0 / epsilon).ln() / p.min(1.0)).ceil();
    if !a.is_finite() || a >= 1e15 {
        return Err(Error::param(format!("default attempt count {a} is unreasonably large")));
    }
    Ok((a as u64).max(1))
}

/// Closed-form success probability of `inner` on a uniformly random image
/// point `(C(x₁),…,C(x_t))` of the `t`-fold product. Available for `perfect`
/// and for `bounded(r)` with `r ≤ 30`; `None` otherwise.
pub fn product_success_closed_form(inner: &InverterSpec, c: &Circuit, t_rep: usize) -> Result<Option<f64>> {
    match inner {
        InverterSpec::Perfect => Ok(Some(1.0)),
        InverterSpec::Bounded { probes } if *probes <= 30 => {
            // with Q = ∏ q(C(xᵢ)), E[1 − (1 − Q)^r] = Σₖ (−1)^{k+1} C(r,k) E[Q^k]
            // and E[Q^k] = (Σ_y q_y^{k+1})^t since blocks are independent
            let profile = ImageProfile::enumerate(c)?;
            let domain = (1u64 << c.n()) as f64;
            let r = *probes as i32;
            let mut total = 0.0;
            let mut binom = 1.0;
            for k in 1..=r {
                binom = binom * (r - k + 1) as f64 / k as f64;
                let moment: f64 = profile
                    .counts
                    .values()
                    .map(|&cnt| (cnt as f64 / domain).powi(k + 1))
                    .sum();
                let term = binom * moment.powf(t_rep as f64);
                total += if k % 2 == 1 { term } else { -term };
            }
            Ok(Some(total.clamp(0.0, 1.0)))
        }
        _ => Ok(None),
    }
}

const ESTIMATE_SAMPLES: u64 = 2_000;

/// Closed form when available, otherwise a fixed-seed Monte Carlo estimate.
fn product_success_estimate(inner: &InverterSpec, c: &Circuit, t_rep: usize) -> Result<f64> {
    if let Some(p) = product_success_closed_form(inner, c, t_rep)? {
        return Ok(p);
    }
    let product = product_circuit(c, t_rep)?;
    let target = Target::new(&product);
    let mut hits = 0u64;
    for i in 0..ESTIMATE_SAMPLES {
        let mut rng = seed::rng(seed::derive(0, Stream::Estimate, i));
        let x = BitString::random(product.n(), &mut rng);
        let y = BitString::new(product.eval_bits(x.bits()));
        let tau = seed::derive(1, Stream::Estimate, i);
        if invert_target(inner, &target, &y, 0.5, tau)?.success {
            hits += 1;
        }
    }
    Ok(hits as f64 / ESTIMATE_SAMPLES as f64)
}

/// A circuit together with lazily computed search structure.
struct Target<'a> {
    circuit: &'a Circuit,
    components: OnceCell<Vec<Component>>,
}

impl<'a> Target<'a> {
    fn new(circuit: &'a Circuit) -> Self {
        Target {
            circuit,
            components: OnceCell::new(),
        }
    }

    fn components(&self) -> &[Component] {
        self.components
            .get_or_init(|| self.circuit.independent_components())
    }
}

/// Runs `spec` against target `y` with randomness `tau`.
pub fn invert(spec: &InverterSpec, c: &Circuit, y: &BitString, epsilon: f64, tau: u64) -> Result<InversionOutcome> {
    if y.len() != c.m() {
        return Err(Error::Arity {
            expected: c.m(),
            got: y.len(),
        });
    }
    check_epsilon(epsilon)?;
    let spec = spec.resolve(c, epsilon)?;
    invert_target(&spec, &Target::new(c), y, epsilon, tau)
}

fn invert_target(spec: &InverterSpec, target: &Target<'_>, y: &BitString, epsilon: f64, tau: u64) -> Result<InversionOutcome> {
    let c = target.circuit;
    match spec {
        InverterSpec::Perfect => {
            let (candidate, probes) = exhaustive_search(target, y, DEFAULT_ENUMERATION_CAP)?;
            Ok(InversionOutcome::checked(c, y, candidate, probes, tau))
        }
        InverterSpec::Bounded { probes } => {
            let mut rng = seed::rng(tau);
            let mut scratch = Vec::new();
            for used in 1..=*probes {
                let x = BitString::random(c.n(), &mut rng);
                if c.maps_to(x.bits(), y.bits(), &mut scratch) {
                    return Ok(InversionOutcome::checked(c, y, Some(x), used, tau));
                }
            }
            Ok(InversionOutcome::checked(c, y, None, *probes, tau))
        }
        InverterSpec::Lex { probes } => {
            let domain = if c.n() >= 64 { u64::MAX } else { 1u64 << c.n() };
            let limit = (*probes).min(domain);
            let mut scratch = Vec::new();
            for rank in 0..limit {
                let x = BitString::from_lex_rank(rank, c.n());
                if c.maps_to(x.bits(), y.bits(), &mut scratch) {
                    return Ok(InversionOutcome::checked(c, y, Some(x), rank + 1, tau));
                }
            }
            Ok(InversionOutcome::checked(c, y, None, limit, tau))
        }
        InverterSpec::Amplified {
            inner,
            repetitions: Some(t_rep),
            attempts: Some(attempts),
        } => amplify_product(inner, c, y, epsilon, *t_rep, *attempts, tau),
        InverterSpec::Amplified { .. } => {
            let resolved = spec.resolve(c, epsilon)?;
            invert_target(&resolved, target, y, epsilon, tau)
        }
    }
}

/// Exhaustive search that handles each independent component separately, so
/// the enumeration cap applies per component rather than to the whole input.
fn exhaustive_search(target: &Target<'_>, y: &BitString, cap: usize) -> Result<(Option<BitString>, u64)> {
    let c = target.circuit;
    let mut x = vec![false; c.n()];
    let mut probes = 0u64;
    let mut scratch = Vec::new();
    for part in target.components() {
        let want: Vec<bool> = part.outputs.iter().map(|&j| y.get(j)).collect();
        let k = part.inputs.len();
        if k > cap {
            return Err(CapacityError::Enumeration { inputs: k, cap }.into());
        }
        let sub_n = part.circuit.n();
        let mut found = None;
        for rank in 0..1u64 << k {
            probes += 1;
            let assignment = BitString::from_lex_rank(rank, sub_n);
            if part.circuit.maps_to(assignment.bits(), &want, &mut scratch) {
                found = Some(assignment);
                break;
            }
        }
        match found {
            Some(a) => {
                for (p, &i) in part.inputs.iter().enumerate() {
                    x[i] = a.get(p);
                }
            }
            None => return Ok((None, probes)),
        }
    }
    Ok((Some(BitString::new(x)), probes))
}

/// Direct-product amplification: each attempt plants `y` at a random block
/// `j` of `t_rep` blocks, fills the other blocks with images of fresh random
/// inputs, and runs `inner` on the product circuit. The first attempt whose
/// answer contains a correct preimage of `y` at block `j` wins.
pub fn amplify_product(
    inner: &InverterSpec,
    c: &Circuit,
    y: &BitString,
    epsilon: f64,
    t_rep: usize,
    attempts: u64,
    tau: u64,
) -> Result<InversionOutcome> {
    if y.len() != c.m() {
        return Err(Error::Arity {
            expected: c.m(),
            got: y.len(),
        });
    }
    if matches!(inner, InverterSpec::Amplified { .. }) {
        return Err(Error::param("amplified inverters cannot be nested"));
    }
    if t_rep == 0 || attempts == 0 {
        return Err(Error::param("amplified inverter needs t_rep ≥ 1 and attempts ≥ 1"));
    }
    let product = product_circuit(c, t_rep)?;
    let target = Target::new(&product);
    let (n, m) = (c.n(), c.m());
    let mut probes = 0u64;
    let mut tuple = vec![false; t_rep * m];
    for attempt in 0..attempts {
        let mut rng = seed::rng(seed::derive(tau, Stream::AmplifierAttempt, attempt));
        let j = rng.random_range(0..t_rep);
        for block in 0..t_rep {
            let image = if block == j {
                y.bits().to_vec()
            } else {
                let x = BitString::random(n, &mut rng);
                c.eval_bits(x.bits())
            };
            tuple[block * m..(block + 1) * m].copy_from_slice(&image);
        }
        let inner_tau = seed::derive(tau, Stream::AmplifierInner, attempt);
        let out = invert_target(inner, &target, &BitString::new(tuple.clone()), epsilon, inner_tau)?;
        probes += out.probes_used;
        if let Some(preimage) = out.candidate {
            let xj = preimage.slice(j * n, n);
            let outcome = InversionOutcome::checked(c, y, Some(xj), probes, tau);
            if outcome.success {
                return Ok(outcome);
            }
        }
    }
    Ok(InversionOutcome::checked(c, y, None, probes, tau))
}
