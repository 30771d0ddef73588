//! Combinatorial laws of value semigroups, against closure membership.

mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(220))]

    #[test]
    fn bounded_tail_forces_positive_first_exponent(seed in any::<u64>()) {
        let (b, a) = gen_bounded_tail(&mut rng(seed));
        let r = check_bounded_tail(&b, &a);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn prefix_equality_propagates(seed in any::<u64>()) {
        let b = gen_prefix_equality(&mut rng(seed));
        let r = check_prefix_equality(&b);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn growing_tuples_fill_the_group(seed in any::<u64>()) {
        let b = gen_growing_tuple(&mut rng(seed));
        let r = check_growing_tuple(&b);
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

#[test]
fn hypotheses_are_met_often() {
    let hits: usize = (0..200)
        .map(|s| {
            let (b, a) = gen_bounded_tail(&mut rng(s));
            check_bounded_tail(&b, &a).unwrap()
        })
        .filter(|h| *h > 0)
        .count();
    assert!(hits >= 100, "{hits}");
    let held = (0..200).filter(|&s| check_prefix_equality(&gen_prefix_equality(&mut rng(s))).unwrap()).count();
    assert!(held >= 50, "{held}");
}
