//! Frozen-file helpers and the circuits behind the QASM golden files.
#![allow(dead_code)]

use std::path::PathBuf;

use qcomm_core::circuits::export_qasm;
use qcomm_core::noise::NoiseModel;
use qcomm_core::protocols::{
    build_bb84_dualrail, build_sdc_circuit, Bb84Symbol, ExperimentPlan, RouteKind, SdcInput,
};
use qcomm_core::topology::DeviceGraph;

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub fn frozen(name: &str) -> String {
    let path = golden_path(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Compares with the frozen file. `QCOMM_BLESS=1` rewrites it first.
pub fn check(name: &str, actual: &str) {
    if std::env::var_os("QCOMM_BLESS").is_some() {
        std::fs::write(golden_path(name), actual).unwrap();
    }
    assert!(
        frozen(name) == actual,
        "{name} differs from the frozen file:\n{actual}"
    );
}

pub fn sdc_zero_swaps() -> String {
    let g = DeviceGraph::bundled("ibmqx5").unwrap();
    let plan = ExperimentPlan::sdc();
    let circ = build_sdc_circuit(
        &plan,
        SdcInput::new(1, 1).unwrap(),
        &g,
        &NoiseModel::ibmqx5_2018(),
    )
    .unwrap();
    export_qasm(&circ).unwrap()
}

pub fn sdc_two_swaps() -> String {
    let g = DeviceGraph::bundled("ibmqx5").unwrap();
    let plan = ExperimentPlan::sdc().with_route(RouteKind::UpperRow, 2);
    let circ = build_sdc_circuit(
        &plan,
        SdcInput::new(1, 0).unwrap(),
        &g,
        &NoiseModel::ibmqx5_2018(),
    )
    .unwrap();
    export_qasm(&circ).unwrap()
}

pub fn bb84_dualrail() -> String {
    let g = DeviceGraph::bundled("ibmqx4").unwrap();
    let plan = ExperimentPlan::bb84_dualrail().with_route(RouteKind::Shuttle, 2);
    let sym = Bb84Symbol::parse("x1").unwrap();
    let circ = build_bb84_dualrail(&plan, sym, &g, &NoiseModel::ibmqx5_2018()).unwrap();
    export_qasm(&circ).unwrap()
}
