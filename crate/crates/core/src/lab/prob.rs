use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `⌈ln(2/δ) / (2τ²)⌉`: samples needed for a two-sided Hoeffding half-width
/// of `τ` at confidence `1 − δ`. Accepts `δ ∈ (0, 2)`, where `ln(2/δ) > 0`.
pub fn hoeffding_samples(tau: f64, delta: f64) -> Result<u64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::param(format!("tau must lie in (0, 1), got {tau}")));
    }
    if !(delta > 0.0 && delta < 2.0) {
        return Err(Error::param(format!("delta must lie in (0, 2), got {delta}")));
    }
    let raw = (2.0 / delta).ln() / (2.0 * tau * tau);
    // absorb floating error in ln() so exact-integer boundaries do not round up
    let n = (raw * (1.0 - 4.0 * f64::EPSILON)).ceil();
    Ok((n as u64).max(1))
}

/// `sqrt(ln(2/δ) / (2N))`.
pub fn hoeffding_half_width(samples: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * samples as f64)).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub enum EstimateKind {
    /// Exact rational value from full enumeration.
    Exact(BigRational),
    MonteCarlo,
}

/// A probability, either exact or sampled with a Hoeffding half-width.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    pub half_width: f64,
    pub samples: u64,
    pub confidence: f64,
}

impl ProbEstimate {
    pub fn exact(value: BigRational, points: u64) -> Self {
        ProbEstimate {
            value: to_f64(&value),
            kind: EstimateKind::Exact(value),
            half_width: 0.0,
            samples: points,
            confidence: 1.0,
        }
    }

    pub fn monte_carlo(hits: u64, samples: u64, delta: f64) -> Self {
        assert!(samples >= 1, "Monte Carlo estimate needs samples");
        ProbEstimate {
            value: hits as f64 / samples as f64,
            kind: EstimateKind::MonteCarlo,
            half_width: hoeffding_half_width(samples, delta),
            samples,
            confidence: 1.0 - delta,
        }
    }

    pub fn exact_value(&self) -> Option<&BigRational> {
        match &self.kind {
            EstimateKind::Exact(r) => Some(r),
            EstimateKind::MonteCarlo => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact_value().is_some()
    }

    /// Whether `other` lies within this estimate's half-width (plus its own).
    pub fn agrees_with(&self, other: &ProbEstimate) -> bool {
        (self.value - other.value).abs() <= self.half_width + other.half_width + 1e-12
    }
}

impl fmt::Display for ProbEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            EstimateKind::Exact(r) => write!(f, "{r} (exact)"),
            EstimateKind::MonteCarlo => write!(f, "{:.6} ± {:.6} (n={})", self.value, self.half_width, self.samples),
        }
    }
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn pow2(exp: usize) -> BigRational {
    BigRational::from_integer(BigInt::one() << exp)
}

pub(crate) fn one() -> BigRational {
    BigRational::one()
}

pub(crate) fn zero() -> BigRational {
    BigRational::zero()
}

/// Outcome of checking an inequality between probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    /// The sampled sides are too close to decide at the stated confidence.
    Inconclusive,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "true",
            Verdict::Violated => "false",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Verdict for `small ≤ large` given point values and total uncertainty.
pub(crate) fn verdict_le(small: f64, large: f64, slack: f64) -> Verdict {
    if small + slack <= large {
        Verdict::Holds
    } else if small - slack > large {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hoeffding_examples() {
        assert_eq!(hoeffding_samples(0.02, 0.01).unwrap(), 6623);
        assert_eq!(hoeffding_samples(0.5, 2.0 * (-0.5f64).exp()).unwrap(), 1);
        assert!(hoeffding_samples(0.0, 0.1).is_err());
        assert!(hoeffding_samples(0.1, 2.0).is_err());
        assert!(hoeffding_samples(0.1, -0.1).is_err());
    }

    #[test]
    fn hoeffding_is_monotone_in_tau() {
        let taus = [0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005];
        for delta in [0.001, 0.01, 0.1, 0.5] {
            let ns: Vec<u64> = taus.iter().map(|&t| hoeffding_samples(t, delta).unwrap()).collect();
            assert!(ns.windows(2).all(|w| w[0] <= w[1]), "{ns:?}");
        }
    }

    #[test]
    fn half_width_inverts_sample_count() {
        let n = hoeffding_samples(0.02, 0.01).unwrap();
        let hw = hoeffding_half_width(n, 0.01);
        assert!(hw <= 0.02 && hw > 0.0199);
    }

    #[test]
    fn verdicts() {
        assert_eq!(verdict_le(0.1, 0.3, 0.05), Verdict::Holds);
        assert_eq!(verdict_le(0.3, 0.1, 0.05), Verdict::Violated);
        assert_eq!(verdict_le(0.28, 0.3, 0.05), Verdict::Inconclusive);
    }
}
