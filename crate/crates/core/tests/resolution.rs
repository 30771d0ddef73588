//! Separating values along blowups follow the weak-transform prediction.

mod common;

use common::*;
use keypoly::blowup::Stop;

#[test]
fn predictions_hold_on_constructed_pairs() {
    for (i, (a, b)) in resolution_pairs().iter().enumerate() {
        let r = check_resolution(a, b).unwrap_or_else(|e| panic!("pair {i}: {e}"));
        assert_eq!(r.stop, Stop::Resolved, "pair {i}");
    }
}

#[test]
fn constructed_pairs_need_blowups() {
    let depths: Vec<usize> =
        resolution_pairs().iter().map(|(a, b)| check_resolution(a, b).unwrap().blowups()).collect();
    assert!(depths.iter().filter(|d| **d >= 2).count() >= 3, "{depths:?}");
}
