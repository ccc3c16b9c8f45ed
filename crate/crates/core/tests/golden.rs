//! Byte-exact comparisons against frozen files in `tests/golden/`.
//! Regenerate with `QCOMM_BLESS=1 cargo test --test golden`.

mod common;

use common::{bb84_dualrail, check, sdc_two_swaps, sdc_zero_swaps};
use qcomm_core::report::{csv_string, replay_fixture};

#[test]
fn sdc_zero_swap_qasm() {
    check("sdc_0swap_in11.qasm", &sdc_zero_swaps());
}

#[test]
fn sdc_two_swap_qasm() {
    check("sdc_2swap_in10.qasm", &sdc_two_swaps());
}

#[test]
fn bb84_dualrail_qasm() {
    check("bb84_dualrail_2swap_x1.qasm", &bb84_dualrail());
}

#[test]
fn table1_replay_csv() {
    check(
        "table1_replay.csv",
        &csv_string(&replay_fixture("table1").unwrap()).unwrap(),
    );
}

#[test]
fn exports_are_repeatable() {
    assert_eq!(sdc_two_swaps(), sdc_two_swaps());
    assert_eq!(bb84_dualrail(), bb84_dualrail());
}
