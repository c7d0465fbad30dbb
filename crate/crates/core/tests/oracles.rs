mod common;

use avoid_lab::circuit::families::{constant_zero, duplicator, parity, single_gate};
use avoid_lab::circuit::{random_circuit, Op};
use avoid_lab::oracles::{
    exact_avoid, image_contains, image_contains_with_cap, mcsp_decide, min_circuit_size, parse_oracle_file,
    shannon_circuit, Basis, ImageProfile, McspLimits, McspQuery, McspSolver, OracleFun,
};
use avoid_lab::{BitString, Circuit, Error, TruthTable};
use common::{all_strings, bs, naive_eval, naive_image, naive_preimage_counts, sequence_search};
use proptest::prelude::*;

fn arb_stretching() -> impl Strategy<Value = Circuit> {
    (1usize..=5, 1usize..=3, 0usize..=10, any::<u64>())
        .prop_map(|(n, k, g, seed)| random_circuit(n, n + k, g, seed).unwrap())
}

proptest! {
    #[test]
    fn membership_matches_reference(c in arb_stretching()) {
        let image = naive_image(&c);
        for y in all_strings(c.m()) {
            prop_assert_eq!(image_contains(&c, &bs(&y)).unwrap(), image.contains(&y));
        }
    }

    #[test]
    fn exact_avoid_is_lex_first_outside_image(c in arb_stretching()) {
        let image = naive_image(&c);
        let want = all_strings(c.m()).into_iter().find(|y| !image.contains(y)).unwrap();
        prop_assert_eq!(exact_avoid(&c).unwrap(), bs(&want));
    }

    #[test]
    fn profile_counts_match_reference(c in arb_stretching()) {
        let profile = ImageProfile::enumerate(&c).unwrap();
        let naive = naive_preimage_counts(&c);
        prop_assert_eq!(profile.image_size(), naive.len() as u64);
        prop_assert_eq!(profile.counts.values().sum::<u64>(), 1u64 << c.n());
        for (y, k) in naive {
            prop_assert_eq!(profile.preimages(&bs(&y)), k);
        }
    }

    #[test]
    fn shannon_circuit_computes_table(vars in 1usize..=5, mask in any::<u64>(), xor in any::<bool>()) {
        let tt = TruthTable::from_mask(vars, mask & ((1u64 << (1 << vars)) - 1)).unwrap();
        let basis = if xor { Basis::AndOrNotXor } else { Basis::AndOrNot };
        let c = shannon_circuit(&tt, basis).unwrap();
        prop_assert_eq!(c.truth_table(1).unwrap(), tt);
    }
}

#[test]
fn image_cap_is_a_hard_error() {
    let c = duplicator(6);
    let y = BitString::zeros(7);
    assert!(matches!(
        image_contains_with_cap(&c, &y, 5),
        Err(Error::Capacity(_))
    ));
    assert!(image_contains_with_cap(&c, &y, 6).unwrap());
}

#[test]
fn exact_avoid_examples() {
    assert_eq!(exact_avoid(&duplicator(1)).unwrap().to_string(), "01");
    assert_eq!(exact_avoid(&constant_zero(2, 3)).unwrap().to_string(), "001");
    assert!(matches!(
        exact_avoid(&parity(2)),
        Err(Error::NotAvoidInstance { .. })
    ));
}

#[test]
fn mcsp_agrees_with_sequence_search_on_two_variables() {
    for (basis, xor) in [(Basis::AndOrNot, false), (Basis::AndOrNotXor, true)] {
        let oracle = sequence_search(2, 4, xor);
        for (mask, want) in oracle.iter().enumerate() {
            let tt = TruthTable::from_mask(2, mask as u64).unwrap();
            assert_eq!(min_circuit_size(&tt, basis, &[]).ok(), *want, "{basis} {tt}");
        }
    }
}

#[test]
fn mcsp_examples() {
    let and = TruthTable::parse("0001").unwrap();
    assert_eq!(min_circuit_size(&and, Basis::AndOrNot, &[]).unwrap(), 1);
    let xor = TruthTable::parse("0110").unwrap();
    assert_eq!(min_circuit_size(&xor, Basis::AndOrNotXor, &[]).unwrap(), 1);
    assert!(min_circuit_size(&xor, Basis::AndOrNot, &[]).unwrap() > 1);
    let proj = TruthTable::parse("0101").unwrap();
    assert_eq!(min_circuit_size(&proj, Basis::AndOrNot, &[]).unwrap(), 0);
    assert!(mcsp_decide(&McspQuery::new(and.clone(), 1, Basis::AndOrNot, vec![])).unwrap());
    assert!(!mcsp_decide(&McspQuery::new(and, 0, Basis::AndOrNot, vec![])).unwrap());
}

#[test]
fn mcsp_matches_single_gate_circuits() {
    for op in Op::ALL {
        let tt = single_gate(op).truth_table(1).unwrap();
        let size = min_circuit_size(&tt, Basis::AndOrNotXor, &[]).unwrap();
        // NOT x1 and the binary gates each need exactly one gate
        assert_eq!(size, 1, "{op:?}");
    }
}

#[test]
fn oracle_gates_cost_one() {
    // parity of three variables as a single oracle gate
    let par3 = TruthTable::from_fn(3, |i| i.count_ones() % 2 == 1).unwrap();
    let oracle = OracleFun::new(par3.clone()).unwrap();
    assert_eq!(min_circuit_size(&par3, Basis::AndOrNot, std::slice::from_ref(&oracle)).unwrap(), 1);
    assert!(!mcsp_decide(&McspQuery::new(par3.clone(), 1, Basis::AndOrNot, vec![])).unwrap());
    assert!(mcsp_decide(&McspQuery::new(par3.clone(), 1, Basis::AndOrNot, vec![oracle.clone()])).unwrap());

    let parsed = parse_oracle_file("# parity\noraclefun 3 01101001\n").unwrap();
    assert_eq!(parsed, vec![oracle]);
    assert!(parse_oracle_file("oraclefun 2 011").is_err());
    assert!(parse_oracle_file("oraclefun 2 0110 extra").is_err());
}

#[test]
fn mcsp_variable_cap_is_capacity_error() {
    let solver = McspSolver::new(McspLimits {
        max_vars: 2,
        ..McspLimits::default()
    });
    let tt = TruthTable::parse("00010111").unwrap();
    let err = solver.min_circuit_size(&tt, Basis::AndOrNot, &[]).unwrap_err();
    assert!(err.is_capacity(), "{err}");
}

#[test]
fn naive_reference_sanity() {
    let d = duplicator(1);
    assert_eq!(naive_eval(&d, &[true]), vec![true, true]);
    assert_eq!(naive_image(&d).len(), 2);
}
