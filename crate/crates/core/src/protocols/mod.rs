//! Superdense coding and BB84 experiments: circuit builders, experiment
//! plans and sweep runners.

mod bb84;
mod plan;
mod sdc;
mod sweep;

pub use bb84::{
    bb84_encode_dualrail, bb84_encode_single, build_bb84_circuit, build_bb84_dualrail,
    build_bb84_single, decode_dualrail, dualrail_target_state, postselect_dualrail, run_bb84_sweep,
    score_bb84_point, single_target_state, Basis, Bb84Cell, Bb84Point, Bb84Symbol,
    PostSelectionResult, BB84_CELLS,
};
pub use plan::{Aggregation, ExperimentPlan, Mitigation, Protocol, Roles, RouteKind, SweepSpec};
pub use sdc::{
    build_sdc_circuit, run_sdc_sweep, score_sdc_point, sdc_encoding, SdcInput, SdcPoint, SDC_INPUTS,
};
pub use sweep::{Sweep, SweepAxis, DEFAULT_DELAY_STEP_NS, DEFAULT_SWAP_STEP};

use crate::error::Result;
use crate::noise::NoiseModel;

/// One grid point of a sweep, resolved against the identity-gate duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    /// Reported x value: SWAP count, or delay in us.
    pub x: f64,
    pub swaps: usize,
    pub delay_gates: usize,
}

impl SweepPoint {
    pub fn delay_ns(&self, noise: &NoiseModel) -> f64 {
        self.delay_gates as f64 * noise.durations.identity_ns
    }
}

/// Grid points of `sweep` applied on top of `base`.
pub fn sweep_points(
    base: &ExperimentPlan,
    sweep: &Sweep,
    noise: &NoiseModel,
) -> Result<Vec<SweepPoint>> {
    if sweep.is_empty() {
        return Err(crate::error::Error::InvalidPlan("empty sweep".into()));
    }
    let tau = noise.durations.identity_ns;
    match sweep {
        Sweep::Swaps(v) => Ok(v
            .iter()
            .map(|&s| SweepPoint {
                x: s as f64,
                swaps: s,
                delay_gates: base.delay_gates,
            })
            .collect()),
        Sweep::Delay(v) => {
            if tau.is_nan() || tau <= 0.0 {
                return Err(crate::error::Error::InvalidPlan(
                    "delay sweep needs a positive identity-gate duration".into(),
                ));
            }
            Ok(v.iter()
                .map(|&t| {
                    let n = (t / tau).round() as usize;
                    if (n as f64 * tau - t).abs() > 1e-6 {
                        log::info!("delay {t} ns rounded to {n} identity gates");
                    }
                    SweepPoint {
                        x: n as f64 * tau / 1000.0,
                        swaps: base.swaps,
                        delay_gates: n,
                    }
                })
                .collect())
        }
    }
}
