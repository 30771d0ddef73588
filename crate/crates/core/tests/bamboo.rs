//! Signed dual graphs stay bamboos under every valid event.

mod common;

use common::*;
use keypoly::dual_graph::{init_graph, BlowupEvent, Position, Region};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_runs_stay_bamboo(seed in any::<u64>()) {
        let r = check_bamboo_run(&mut rng(seed));
        prop_assert!(r.is_ok(), "{:?}", r.err());
    }
}

#[test]
fn first_step_in_u_gives_three_chain() {
    let g = init_graph(Region::U).apply(&BlowupEvent::Case22First).unwrap();
    assert_eq!(g.vertices.len(), 3);
    assert_eq!(g.edges.len(), 2);
    assert!(g.is_bamboo());
}

#[test]
fn isolated_interval_with_omega_points() {
    for omega in 1..=4 {
        let ev = BlowupEvent::Case21 { a: 0, position: Position::Isolated, omega };
        let g = init_graph(Region::V).apply(&ev).unwrap();
        assert_eq!(g.vertices.len(), 2 * omega + 1);
        assert_eq!(g.edges.len(), 2 * omega);
        assert!(g.is_bamboo());
    }
}

#[test]
fn listed_events_pass_the_checks() {
    for seed in 0..50 {
        let g = check_bamboo_run(&mut rng(seed)).unwrap();
        for e in g.valid_events(3) {
            assert!(g.check(&e).is_ok(), "{e}");
        }
    }
}
