//! Success probabilities of inverters and the two inequalities relating
//! them: the ratio bound `Pr_y[I] ≤ 2^(n−m)·Pr_x[I]` and the conditional bound
//! `Pr[y ∉ Image | ¬I] ≥ Pr_x[I]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::prob::{one, pow2, ratio, to_f64, verdict_le, zero, ProbEstimate, Verdict};
use crate::circuit::{BitString, Circuit};
use crate::error::{CapacityError, Error, Result};
use crate::inverters::{invert, InverterSpec};
use crate::oracles::ImageProfile;
use crate::seed::{self, Stream};

/// Largest `m` for which the exact path enumerates all of `{0,1}ᵐ`.
pub const DEFAULT_EXACT_CAP: usize = 16;

/// Error target passed to non-amplified inverters, which ignore it.
const NEUTRAL_EPSILON: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `y` uniform over `{0,1}ᵐ`.
    OverY,
    /// `y = C(x)` with `x` uniform over `{0,1}ⁿ`.
    OverX,
}

/// Exact per-target success probabilities, plus the image profile they were
/// computed against.
pub(crate) struct PointTable {
    pub profile: ImageProfile,
    /// `(y, p_y)` for every `y ∈ {0,1}ᵐ` in lexicographic order.
    pub points: Vec<(BitString, BigRational)>,
}

fn closed_form_bounded(probes: u64, preimages: u64, n: usize) -> Result<BigRational> {
    let probes = u32::try_from(probes)
        .ok()
        .filter(|&r| r <= 1 << 16)
        .ok_or_else(|| Error::Unsupported(format!("exact path supports at most 65536 probes, got {probes}")))?;
    let domain = BigInt::from(1u64) << n;
    let miss = (domain.clone() - BigInt::from(preimages)).pow(probes);
    Ok(one() - BigRational::new(miss, domain.pow(probes)))
}

pub(crate) fn point_table(spec: &InverterSpec, c: &Circuit, cap: usize) -> Result<PointTable> {
    if c.m() > cap {
        return Err(CapacityError::Enumeration { inputs: c.m(), cap }.into());
    }
    if matches!(spec, InverterSpec::Amplified { .. }) {
        return Err(Error::Unsupported(format!(
            "no exact success probability for `{spec}`; use the Monte Carlo estimator"
        )));
    }
    let profile = ImageProfile::enumerate(c)?;
    let points = (0..1u64 << c.m())
        .into_par_iter()
        .map(|rank| {
            let y = BitString::from_lex_rank(rank, c.m());
            let p = match spec {
                InverterSpec::Bounded { probes } => closed_form_bounded(*probes, profile.preimages(&y), c.n())?,
                _ => {
                    if invert(spec, c, &y, NEUTRAL_EPSILON, 0)?.success {
                        one()
                    } else {
                        zero()
                    }
                }
            };
            Ok((y, p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PointTable { profile, points })
}

impl PointTable {
    fn over_y(&self, m: usize) -> BigRational {
        let total: BigRational = self.points.iter().map(|(_, p)| p.clone()).sum();
        total / pow2(m)
    }

    fn over_x(&self, n: usize) -> BigRational {
        let total: BigRational = self
            .points
            .iter()
            .map(|(y, p)| p * BigRational::from_integer(self.profile.preimages(y).into()))
            .sum();
        total / pow2(n)
    }
}

/// Exact `Pr[I]` by full enumeration. Works for `perfect`, `lex` and
/// `bounded` (through `1 − (1 − q_y)^r` with `q_y = |C⁻¹(y)|/2ⁿ`).
pub fn exact_success_prob(spec: &InverterSpec, c: &Circuit, side: Side) -> Result<ProbEstimate> {
    exact_success_prob_with_cap(spec, c, side, DEFAULT_EXACT_CAP)
}

pub fn exact_success_prob_with_cap(spec: &InverterSpec, c: &Circuit, side: Side, cap: usize) -> Result<ProbEstimate> {
    let table = point_table(spec, c, cap)?;
    Ok(match side {
        Side::OverY => ProbEstimate::exact(table.over_y(c.m()), 1 << c.m()),
        Side::OverX => ProbEstimate::exact(table.over_x(c.n()), 1 << c.n()),
    })
}

/// Sampled `Pr[I]` over `samples` independent draws of target and randomness.
pub fn monte_carlo_success_prob(
    spec: &InverterSpec,
    c: &Circuit,
    side: Side,
    epsilon: f64,
    samples: u64,
    delta: f64,
    seed: u64,
) -> Result<ProbEstimate> {
    if samples == 0 {
        return Err(Error::param("Monte Carlo estimate needs at least one sample"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("delta must lie in (0, 1), got {delta}")));
    }
    let spec = spec.resolve(c, epsilon)?;
    let hits = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::rng(seed::derive(seed, Stream::Estimate, i));
            let y = match side {
                Side::OverY => BitString::random(c.m(), &mut rng),
                Side::OverX => BitString::new(c.eval_bits(BitString::random(c.n(), &mut rng).bits())),
            };
            let tau = seed::derive(seed, Stream::Trial, i);
            Ok::<u64, Error>(u64::from(invert(&spec, c, &y, epsilon, tau)?.success))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(ProbEstimate::monte_carlo(hits, samples, delta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub circuit_id: String,
    pub spec: String,
    pub lhs: ProbEstimate,
    /// Right-hand side including any scaling, so the check is `lhs` vs `rhs`.
    pub rhs: ProbEstimate,
    pub verdict: Verdict,
    /// `rhs − lhs` for upper bounds, `lhs − rhs` for lower bounds; never
    /// negative when the inequality holds.
    pub margin: f64,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

fn exact_verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

/// Exact check of `Pr_y[I] ≤ 2^(n−m)·Pr_x[I]`.
pub fn verify_lemma_ratio(spec: &InverterSpec, c: &Circuit) -> Result<LemmaReport> {
    verify_lemma_ratio_with_cap(spec, c, DEFAULT_EXACT_CAP)
}

pub fn verify_lemma_ratio_with_cap(spec: &InverterSpec, c: &Circuit, cap: usize) -> Result<LemmaReport> {
    let table = point_table(spec, c, cap)?;
    let lhs = table.over_y(c.m());
    let rhs = table.over_x(c.n()) / pow2(c.m()) * pow2(c.n());
    let verdict = exact_verdict(lhs <= rhs);
    Ok(LemmaReport {
        circuit_id: c.name().to_string(),
        spec: spec.to_string(),
        margin: to_f64(&(&rhs - &lhs)),
        lhs: ProbEstimate::exact(lhs, 1 << c.m()),
        rhs: ProbEstimate::exact(rhs, 1 << c.n()),
        verdict,
    })
}

/// Exact check of `Pr[y ∉ Image | ¬I] ≥ Pr_x[I]` with `y` uniform.
pub fn verify_lemma_conditional(spec: &InverterSpec, c: &Circuit) -> Result<LemmaReport> {
    verify_lemma_conditional_with_cap(spec, c, DEFAULT_EXACT_CAP)
}

pub fn verify_lemma_conditional_with_cap(spec: &InverterSpec, c: &Circuit, cap: usize) -> Result<LemmaReport> {
    let table = point_table(spec, c, cap)?;
    let scale = pow2(c.m());
    let mut not_inverted = zero();
    let mut outside_and_not_inverted = zero();
    for (y, p) in &table.points {
        not_inverted += one() - p;
        if !table.profile.contains(y) {
            outside_and_not_inverted += one() - p;
        }
    }
    if not_inverted == zero() {
        return Err(Error::param(format!(
            "inverter `{spec}` never fails on `{}`; the conditional is undefined",
            c.name()
        )));
    }
    let outside = ratio((1u64 << c.m()) - table.profile.image_size(), 1) / &scale;
    // soundness: the inverter never succeeds off the image
    debug_assert_eq!(&outside_and_not_inverted / &scale, outside);
    let lhs = outside_and_not_inverted / not_inverted;
    let rhs = table.over_x(c.n());
    let verdict = exact_verdict(lhs >= rhs);
    Ok(LemmaReport {
        circuit_id: c.name().to_string(),
        spec: spec.to_string(),
        margin: to_f64(&(&lhs - &rhs)),
        lhs: ProbEstimate::exact(lhs, 1 << c.m()),
        rhs: ProbEstimate::exact(rhs, 1 << c.n()),
        verdict,
    })
}

/// Sampled ratio check. Holds only if it survives both half-widths.
pub fn verify_lemma_ratio_sampled(
    spec: &InverterSpec,
    c: &Circuit,
    epsilon: f64,
    samples: u64,
    delta: f64,
    seed: u64,
) -> Result<LemmaReport> {
    let lhs = monte_carlo_success_prob(spec, c, Side::OverY, epsilon, samples, delta, seed::derive(seed, Stream::Cell, 0))?;
    let over_x = monte_carlo_success_prob(spec, c, Side::OverX, epsilon, samples, delta, seed::derive(seed, Stream::Cell, 1))?;
    let scale = 2f64.powi(c.n() as i32 - c.m() as i32);
    let rhs = ProbEstimate {
        value: over_x.value * scale,
        half_width: over_x.half_width * scale,
        ..over_x
    };
    let verdict = verdict_le(lhs.value, rhs.value, lhs.half_width + rhs.half_width);
    Ok(LemmaReport {
        circuit_id: c.name().to_string(),
        spec: spec.to_string(),
        margin: rhs.value - lhs.value,
        lhs,
        rhs,
        verdict,
    })
}
