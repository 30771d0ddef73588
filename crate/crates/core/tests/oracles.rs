//! Library results against independent brute-force oracles.

mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn monomial_value_matches_ideal_membership(seed in any::<u64>()) {
        let c = gen_mono_case(&mut rng(seed));
        prop_assert!(check_monomial_value(&c).is_ok(), "{:?}", check_monomial_value(&c));
    }

    #[test]
    fn semigroup_enumeration_matches_closure(seed in any::<u64>()) {
        let (g, n) = gen_semigroup_case(&mut rng(seed));
        let r = check_semigroup(&g, n);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn sum_value_iff_leads_survive(seed in any::<u64>()) {
        let s = gen_sum_case(&mut rng(seed));
        let r = check_sum_value(&s);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn proportionality_matches_grid(seed in any::<u64>()) {
        let (a, b) = gen_lead_pair(&mut rng(seed));
        let r = check_proportional(&a, &b);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn standard_form_value_matches_series(seed in any::<u64>()) {
        let f = gen_root_combination(&mut rng(seed));
        let r = check_standard_value(&f);
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

#[test]
fn sum_cases_cover_both_directions() {
    let outcomes: Vec<bool> = (0..200).map(|s| check_sum_value(&gen_sum_case(&mut rng(s))).unwrap()).collect();
    assert!(outcomes.iter().filter(|c| **c).count() >= 20);
    assert!(outcomes.iter().filter(|c| !**c).count() >= 20);
}

#[test]
fn lead_pairs_cover_both_answers() {
    let outcomes: Vec<bool> = (0..200)
        .map(|s| {
            let (a, b) = gen_lead_pair(&mut rng(s));
            check_proportional(&a, &b).unwrap()
        })
        .collect();
    assert!(outcomes.iter().filter(|c| **c).count() >= 20);
    assert!(outcomes.iter().filter(|c| !**c).count() >= 20);
}

#[test]
fn standard_form_cases_mostly_below_the_level() {
    let rs = ajm_roots();
    let below = (0..200)
        .filter(|&s| {
            let f = gen_root_combination(&mut rng(s));
            matches!(rs.curvette.nu_value(&f).unwrap(), keypoly::SeriesOrder::Finite(v) if v < keypoly::arith::rat_int(37))
        })
        .count();
    assert!(below >= 100, "{below}");
}
