mod common;

use avoid_lab::avoid::{solve_avoid, AvoidOutcome, AvoidParams};
use avoid_lab::circuit::families::{duplicator, xor_chain};
use avoid_lab::circuit::random_circuit;
use avoid_lab::inverters::InverterSpec;
use avoid_lab::lab::{
    exact_bottom_prob, exact_success_prob, exact_theorem_error, hoeffding_half_width, hoeffding_samples,
    measure_theorem_error, monte_carlo_success_prob, run_solver, verify_lemma_conditional, verify_lemma_ratio,
    EstimateKind, Side,
};
use avoid_lab::Circuit;
use common::{all_strings, bs, naive_image, naive_preimage_counts};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn r(num: u64, den: u64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn exact(spec: &InverterSpec, c: &Circuit, side: Side) -> BigRational {
    match exact_success_prob(spec, c, side).unwrap().kind {
        EstimateKind::Exact(v) => v,
        EstimateKind::MonteCarlo => panic!("expected an exact value"),
    }
}

fn arb_spec() -> impl Strategy<Value = InverterSpec> {
    prop_oneof![
        Just(InverterSpec::Perfect),
        (1u64..5).prop_map(|k| InverterSpec::lex(k).unwrap()),
        (1u64..5).prop_map(|k| InverterSpec::bounded(k).unwrap()),
    ]
}

fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (1usize..=4, 1usize..=3, 0usize..=8, any::<u64>())
        .prop_map(|(n, k, g, seed)| random_circuit(n, n + k, g, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lemmas_hold_for_sound_inverters(spec in arb_spec(), c in arb_circuit()) {
        prop_assert!(verify_lemma_ratio(&spec, &c).unwrap().holds());
        prop_assert!(verify_lemma_conditional(&spec, &c).unwrap().holds());
    }

    #[test]
    fn bounded_exact_matches_preimage_formula(probes in 1u64..6, c in arb_circuit()) {
        // Pr_x[I] = Σ_y (k_y/2ⁿ)·(1 − (1 − k_y/2ⁿ)^r)
        let spec = InverterSpec::bounded(probes).unwrap();
        let domain = 1u64 << c.n();
        let mut want = r(0, 1);
        for (_, k) in naive_preimage_counts(&c) {
            let miss = r(domain - k, domain);
            let mut pow = r(1, 1);
            for _ in 0..probes {
                pow *= &miss;
            }
            want += r(k, domain) * (r(1, 1) - pow);
        }
        prop_assert_eq!(exact(&spec, &c, Side::OverX), want);
    }

    #[test]
    fn perfect_success_is_image_density(c in arb_circuit()) {
        let image = naive_image(&c).len() as u64;
        prop_assert_eq!(exact(&InverterSpec::Perfect, &c, Side::OverY), r(image, 1 << c.m()));
        prop_assert_eq!(exact(&InverterSpec::Perfect, &c, Side::OverX), r(1, 1));
    }

    #[test]
    fn solver_outcome_classes_sum_to_runs(c in arb_circuit(), seed in any::<u64>(), runs in 1u64..60) {
        let p = AvoidParams::new(0.2, c.n(), seed).unwrap();
        let counts = run_solver(&c, &p, &InverterSpec::bounded(2).unwrap(), runs).unwrap();
        prop_assert_eq!(counts.total(), runs);
    }
}

#[test]
fn documented_examples() {
    let d = duplicator(1);
    let lex1 = InverterSpec::lex(1).unwrap();
    assert_eq!(exact(&lex1, &d, Side::OverY), r(1, 4));
    assert_eq!(exact(&lex1, &d, Side::OverX), r(1, 2));
    let ratio = verify_lemma_ratio(&lex1, &d).unwrap();
    assert_eq!(ratio.lhs.exact_value(), ratio.rhs.exact_value());
    let cond = verify_lemma_conditional(&lex1, &d).unwrap();
    assert_eq!(cond.lhs.exact_value(), Some(&r(2, 3)));

    let inj = xor_chain(4);
    assert_eq!(exact(&InverterSpec::Perfect, &inj, Side::OverY), r(1, 2));
    let cond = verify_lemma_conditional(&InverterSpec::Perfect, &inj).unwrap();
    assert_eq!(cond.lhs.exact_value(), Some(&r(1, 1)));
    assert_eq!(cond.margin, 0.0);
}

#[test]
fn exact_and_sampled_estimators_agree() {
    for seed in 0..3u64 {
        let c = random_circuit(3, 4, 6, 40 + seed).unwrap();
        for spec in [InverterSpec::Perfect, InverterSpec::lex(3).unwrap(), InverterSpec::bounded(2).unwrap()] {
            for side in [Side::OverY, Side::OverX] {
                let e = exact_success_prob(&spec, &c, side).unwrap();
                let mc = monte_carlo_success_prob(&spec, &c, side, 0.1, 3000, 0.001, seed).unwrap();
                assert!(e.agrees_with(&mc), "{spec} {side:?}: {e} vs {mc}");
                assert_eq!(mc.samples, 3000);
                assert!((mc.half_width - hoeffding_half_width(3000, 0.001)).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn perfect_bottom_rate_on_injective_circuit() {
    let c = duplicator(8);
    assert!((exact_bottom_prob(&InverterSpec::Perfect, &c, 8).unwrap() - 2f64.powi(-8)).abs() < 1e-15);
    let runs = hoeffding_samples(0.02, 0.01).unwrap();
    let p = AvoidParams::new(0.1, 8, 3).unwrap();
    let report = measure_theorem_error(&c, &p, &InverterSpec::Perfect, runs, 0.01).unwrap();
    assert_eq!(report.counts.found_invalid, 0);
    assert!((report.counts.bottom as f64 / runs as f64 - 2f64.powi(-8)).abs() <= report.half_width);
    assert!(report.holds());
}

#[test]
fn solver_error_matches_exact_value() {
    let c = random_circuit(2, 3, 4, 5).unwrap();
    let spec = InverterSpec::lex(1).unwrap();
    let t = 3;
    let exact = exact_theorem_error(&spec, &c, t).unwrap().to_f64().unwrap();
    let runs = 20_000u64;
    let mut failures = 0u64;
    let image = naive_image(&c);
    for seed in 0..runs {
        let p = AvoidParams::new(0.1, t, seed).unwrap();
        match solve_avoid(&c, &p, &spec).unwrap().outcome {
            AvoidOutcome::Found(y) if !image.contains(y.bits()) => {}
            _ => failures += 1,
        }
    }
    assert!((failures as f64 / runs as f64 - exact).abs() <= hoeffding_half_width(runs, 0.001));
}

#[test]
fn found_strings_are_drawn_from_the_full_range() {
    // the solver only returns strings it drew; over many seeds every
    // non-image string of the duplicator shows up
    let d = duplicator(1);
    let mut seen = std::collections::BTreeSet::new();
    for seed in 0..200 {
        let p = AvoidParams::new(0.1, 4, seed).unwrap();
        if let AvoidOutcome::Found(y) = solve_avoid(&d, &p, &InverterSpec::Perfect).unwrap().outcome {
            seen.insert(y);
        }
    }
    let outside: Vec<_> = all_strings(2).into_iter().filter(|y| y[0] != y[1]).map(|y| bs(&y)).collect();
    assert_eq!(seen.into_iter().collect::<Vec<_>>(), outside);
}
