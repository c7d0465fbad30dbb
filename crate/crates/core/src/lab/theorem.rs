use num_rational::BigRational;
use rayon::prelude::*;

use super::lemmas::{exact_success_prob, monte_carlo_success_prob, point_table, Side, DEFAULT_EXACT_CAP};
use super::prob::{hoeffding_half_width, one, EstimateKind, pow2, to_f64, zero, ProbEstimate};
use crate::avoid::{check_instance, solve_avoid, trivial_sample, AvoidOutcome, AvoidParams};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::inverters::InverterSpec;
use crate::oracles::ImageProfile;
use crate::seed::{self, Stream};

/// Outcome counts of repeated solver runs, classified with the exact image
/// oracle.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunCounts {
    pub found_valid: u64,
    pub found_invalid: u64,
    pub bottom: u64,
}

impl RunCounts {
    pub fn total(&self) -> u64 {
        self.found_valid + self.found_invalid + self.bottom
    }

    /// Fraction of runs that did not return a string outside the image.
    pub fn error_rate(&self) -> f64 {
        (self.found_invalid + self.bottom) as f64 / self.total() as f64
    }

    fn merge(self, o: RunCounts) -> RunCounts {
        RunCounts {
            found_valid: self.found_valid + o.found_valid,
            found_invalid: self.found_invalid + o.found_invalid,
            bottom: self.bottom + o.bottom,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremErrorReport {
    pub circuit_id: String,
    pub spec: String,
    pub params: AvoidParams,
    pub counts: RunCounts,
    /// Per-call miss probability on random image points, `1 − Pr_x[I]`.
    pub miss: ProbEstimate,
    pub half_width: f64,
    /// `miss·t + 2⁻ᵗ + half_width`, with `miss` taken at its upper end when sampled.
    pub bound: f64,
}

impl TheoremErrorReport {
    pub fn error_rate(&self) -> f64 {
        self.counts.error_rate()
    }

    pub fn holds(&self) -> bool {
        self.error_rate() <= self.bound
    }

    /// The same check with a caller-chosen statistical slack.
    pub fn holds_with_slack(&self, slack: f64) -> bool {
        self.error_rate() <= self.analytic_bound() + slack
    }

    /// `miss·t + 2⁻ᵗ` without any statistical slack.
    pub fn analytic_bound(&self) -> f64 {
        let miss = (self.miss.value + self.miss.half_width).min(1.0);
        miss * self.params.t as f64 + 2f64.powi(-(self.params.t as i32))
    }
}

/// Runs the solver `runs` times on independent sub-seeds of `params.seed`.
pub fn run_solver(c: &Circuit, params: &AvoidParams, spec: &InverterSpec, runs: u64) -> Result<RunCounts> {
    check_instance(c)?;
    let profile = ImageProfile::enumerate(c)?;
    let spec = spec.resolve(c, params.epsilon)?;
    (0..runs)
        .into_par_iter()
        .map(|r| {
            let p = params.with_seed(seed::derive(params.seed, Stream::Trial, r));
            let mut counts = RunCounts::default();
            match solve_avoid(c, &p, &spec)?.outcome {
                AvoidOutcome::Found(y) if profile.contains(&y) => counts.found_invalid += 1,
                AvoidOutcome::Found(_) => counts.found_valid += 1,
                AvoidOutcome::Bottom => counts.bottom += 1,
            }
            Ok(counts)
        })
        .try_reduce(RunCounts::default, |a, b| Ok(a.merge(b)))
}

/// Empirical error of the solver against `miss·t + 2⁻ᵗ + half_width`. The
/// per-call miss is exact when an exact path exists, otherwise sampled with
/// `runs` draws.
pub fn measure_theorem_error(
    c: &Circuit,
    params: &AvoidParams,
    spec: &InverterSpec,
    runs: u64,
    delta: f64,
) -> Result<TheoremErrorReport> {
    if runs == 0 {
        return Err(Error::param("runs must be at least 1"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("delta must lie in (0, 1), got {delta}")));
    }
    let counts = run_solver(c, params, spec, runs)?;
    let success = match exact_success_prob(spec, c, Side::OverX) {
        Ok(p) => p,
        Err(Error::Unsupported(_)) | Err(Error::Capacity(_)) => monte_carlo_success_prob(
            spec,
            c,
            Side::OverX,
            params.epsilon,
            runs,
            delta,
            seed::derive(params.seed, Stream::Estimate, 0),
        )?,
        Err(e) => return Err(e),
    };
    let miss = ProbEstimate {
        value: 1.0 - success.value,
        kind: match success.kind {
            EstimateKind::Exact(p) => EstimateKind::Exact(one() - p),
            k => k,
        },
        ..success
    };
    let half_width = hoeffding_half_width(runs, delta);
    let mut report = TheoremErrorReport {
        circuit_id: c.name().to_string(),
        spec: spec.to_string(),
        params: *params,
        counts,
        miss,
        half_width,
        bound: 0.0,
    };
    report.bound = report.analytic_bound() + half_width;
    Ok(report)
}

/// Exact failure probability of the solver (found an image point, or ⊥).
///
/// With `a = Pr[y ∈ Im ∧ ¬I]` and `b = Pr[y ∈ Im ∧ I]` per iteration, the
/// solver fails with probability `a·(1 + b + … + b^(t−1)) + b^t`.
pub fn exact_theorem_error(spec: &InverterSpec, c: &Circuit, t: usize) -> Result<BigRational> {
    check_instance(c)?;
    if t == 0 {
        return Err(Error::param("t must be at least 1"));
    }
    let table = point_table(spec, c, DEFAULT_EXACT_CAP)?;
    let (mut a, mut b) = (zero(), zero());
    for (y, p) in &table.points {
        if table.profile.contains(y) {
            a += one() - p;
            b += p.clone();
        }
    }
    let scale = pow2(c.m());
    let (a, b) = (a / &scale, b / &scale);
    let mut geometric = zero();
    let mut power = one();
    for _ in 0..t {
        geometric += &power;
        power *= &b;
    }
    Ok(a * geometric + power)
}

/// Exact `Pr[⊥]` of the solver: `Pr[y ∈ Im ∧ I]^t`.
pub fn exact_bottom_prob(spec: &InverterSpec, c: &Circuit, t: usize) -> Result<f64> {
    check_instance(c)?;
    let table = point_table(spec, c, DEFAULT_EXACT_CAP)?;
    let b: BigRational = table
        .points
        .iter()
        .filter(|(y, _)| table.profile.contains(y))
        .map(|(_, p)| p.clone())
        .sum::<BigRational>()
        / pow2(c.m());
    Ok(to_f64(&b).powi(t as i32))
}

/// Fraction of uniform draws from `{0,1}ᵐ` that avoid the image.
pub fn measure_trivial_sampler(c: &Circuit, samples: u64, delta: f64, seed: u64) -> Result<ProbEstimate> {
    if samples == 0 {
        return Err(Error::param("samples must be at least 1"));
    }
    let valid = (0..samples)
        .into_par_iter()
        .map(|i| trivial_sample(c, seed::derive(seed, Stream::Trial, i)).map(|s| u64::from(s.valid)))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(ProbEstimate::monte_carlo(valid, samples, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::families::{duplicator, xor_chain};
    use crate::circuit::random_circuit;
    use crate::lab::prob::ratio;

    #[test]
    fn perfect_never_returns_image_points() {
        let c = random_circuit(3, 4, 6, 11).unwrap();
        let p = AvoidParams::new(0.1, 3, 5).unwrap();
        let counts = run_solver(&c, &p, &InverterSpec::Perfect, 300).unwrap();
        assert_eq!(counts.found_invalid, 0);
        assert_eq!(counts.total(), 300);
    }

    #[test]
    fn exact_error_for_perfect_is_bottom_only() {
        // duplicator(1): half the strings are images, all inverted
        let e = exact_theorem_error(&InverterSpec::Perfect, &duplicator(1), 3).unwrap();
        assert_eq!(e, ratio(1, 8));
    }

    #[test]
    fn exact_error_matches_simulation() {
        let c = xor_chain(2);
        let spec = InverterSpec::bounded(2).unwrap();
        let p = AvoidParams::new(0.1, 2, 77).unwrap();
        let report = measure_theorem_error(&c, &p, &spec, 20_000, 0.001).unwrap();
        let exact = to_f64(&exact_theorem_error(&spec, &c, 2).unwrap());
        assert!((report.error_rate() - exact).abs() <= report.half_width, "{} vs {exact}", report.error_rate());
        assert!(report.holds());
        assert_eq!(report.counts.total(), 20_000);
    }

    #[test]
    fn deterministic_counts() {
        let c = duplicator(3);
        let p = AvoidParams::new(0.1, 3, 9).unwrap();
        let spec = InverterSpec::bounded(2).unwrap();
        assert_eq!(run_solver(&c, &p, &spec, 500).unwrap(), run_solver(&c, &p, &spec, 500).unwrap());
    }

    #[test]
    fn trivial_sampler_rate() {
        let c = duplicator(4);
        let est = measure_trivial_sampler(&c, 4000, 0.01, 1).unwrap();
        assert!((est.value - 0.5).abs() <= est.half_width);
    }
}
