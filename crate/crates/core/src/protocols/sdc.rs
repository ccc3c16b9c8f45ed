use std::collections::BTreeMap;

use rayon::prelude::*;

use super::plan::{ExperimentPlan, Protocol};
use super::sweep::Sweep;
use super::{sweep_points, SweepPoint};
use crate::circuits::{identity_train, Circuit, Gate, GateDurations, GateKind};
use crate::error::{Error, Result};
use crate::metrics::{mutual_information, JointDistribution, MutualInformation};
use crate::noise::{correction_angle, NoiseModel};
use crate::simcore::{derive_seed, simulate, CellOutcome};
use crate::topology::{build_swap_chain, DeviceGraph};

/// Input labels `a1a2`, in the order 00, 10, 01, 11.
pub const SDC_INPUTS: [&str; 4] = ["00", "10", "01", "11"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SdcInput {
    pub a1: u8,
    pub a2: u8,
}

impl SdcInput {
    pub fn new(a1: u8, a2: u8) -> Result<Self> {
        if a1 > 1 || a2 > 1 {
            return Err(Error::InvalidParameter(format!("input bits ({a1}, {a2})")));
        }
        Ok(Self { a1, a2 })
    }

    pub fn parse(label: &str) -> Result<Self> {
        match label.as_bytes() {
            [a, b] if matches!(a, b'0' | b'1') && matches!(b, b'0' | b'1') => {
                Self::new(a - b'0', b - b'0')
            }
            _ => Err(Error::InvalidParameter(format!("input label `{label}`"))),
        }
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.a1, self.a2)
    }

    pub fn all() -> [SdcInput; 4] {
        SDC_INPUTS.map(|l| Self::parse(l).expect("valid label"))
    }
}

/// Alice's gate pair on her qubit: 00 -> II, 10 -> ZI, 01 -> IX, 11 -> ZX.
pub fn sdc_encoding(input: SdcInput, target: &str, durations: &GateDurations) -> Result<Vec<Gate>> {
    let first = if input.a1 == 1 {
        GateKind::Z
    } else {
        GateKind::I
    };
    let second = if input.a2 == 1 {
        GateKind::X
    } else {
        GateKind::I
    };
    Ok(vec![
        durations.gate(first, target)?,
        durations.gate(second, target)?,
    ])
}

/// Bell pair on (stored, payload), identity train on the stored qubit,
/// optional drift correction, outbound SWAP leg, Alice's encoding, return
/// leg, and the Bell measurement. Outcome bits are `b1b2` (stored, then payload).
pub fn build_sdc_circuit(
    plan: &ExperimentPlan,
    input: SdcInput,
    graph: &DeviceGraph,
    noise: &NoiseModel,
) -> Result<Circuit> {
    plan.validate()?;
    if plan.protocol != Protocol::Sdc {
        return Err(Error::InvalidPlan(format!(
            "{:?} plan given to the SDC builder",
            plan.protocol
        )));
    }
    let d = &noise.durations;
    let stored = plan.roles.stored.as_str();
    let payload = plan.roles.payload.as_str();
    if !graph.contains(stored) {
        return Err(Error::RouteMismatch(format!(
            "`{stored}` is not on device {}",
            graph.name()
        )));
    }
    let route = plan.resolve_route(graph)?;
    if route.nodes().iter().any(|n| n == stored) {
        return Err(Error::RouteMismatch(format!(
            "route passes through the stored qubit {stored}"
        )));
    }

    let mut qubits = vec![stored.to_string()];
    qubits.extend(route.nodes());
    let mut circ = Circuit::new(qubits)?;

    circ.push(d.gate(GateKind::H, stored)?)?;
    circ.extend(graph.cnot(stored, payload, d)?)?;
    circ.extend(identity_train(stored, plan.delay_gates, d.identity_ns)?)?;
    if plan.mitigation.phase_correction {
        let phi = match &noise.drift {
            Some(drift) => {
                let elapsed: f64 = circ
                    .gates()
                    .iter()
                    .filter(|g| drift.accrues_during(g))
                    .map(|g| g.duration_ns)
                    .sum();
                correction_angle(elapsed, drift.t_osc_us)
            }
            None => 0.0,
        };
        circ.push(d.gate(GateKind::Phase(phi), stored)?)?;
    }

    let out = build_swap_chain(&route.outbound, graph, d)?;
    let alice = out.payload_position(payload).to_string();
    circ.extend(out.gates)?;
    circ.extend(sdc_encoding(input, &alice, d)?)?;
    let back = build_swap_chain(&route.inbound, graph, d)?;
    let last = back.payload_position(&alice).to_string();
    circ.extend(back.gates)?;

    circ.extend(graph.cnot(stored, &last, d)?)?;
    circ.push(d.gate(GateKind::H, stored)?)?;
    circ.push(Gate::measure(stored)?)?;
    circ.push(Gate::measure(&last)?)?;

    circ.metadata.insert("protocol".into(), "sdc".into());
    circ.metadata.insert("input".into(), input.label());
    circ.metadata
        .insert("swaps".into(), route.swap_count().to_string());
    circ.metadata
        .insert("delay_gates".into(), plan.delay_gates.to_string());
    circ.metadata.insert("alice".into(), alice);
    Ok(circ)
}

#[derive(Debug, Clone)]
pub struct SdcPoint {
    pub point: SweepPoint,
    pub mutual_information: MutualInformation,
    pub joint: JointDistribution,
    /// Per input label.
    pub cells: BTreeMap<String, CellOutcome>,
}

/// Runs all four inputs at every sweep point with equal shots and scores
/// I(A, B) with uniform inputs.
pub fn run_sdc_sweep(
    base: &ExperimentPlan,
    sweep: &Sweep,
    graph: &DeviceGraph,
    noise: &NoiseModel,
) -> Result<Vec<SdcPoint>> {
    base.validate()?;
    let points = sweep_points(base, sweep, noise)?;
    let opts = base.sim_options();
    let jobs: Vec<(usize, SdcInput)> = (0..points.len())
        .flat_map(|p| SdcInput::all().map(|i| (p, i)))
        .collect();
    let outcomes = jobs
        .par_iter()
        .enumerate()
        .map(|(k, (p, input))| {
            let mut plan = base.clone();
            plan.swaps = points[*p].swaps;
            plan.delay_gates = points[*p].delay_gates;
            let circ = build_sdc_circuit(&plan, *input, graph, noise)?;
            simulate(
                &circ,
                noise,
                plan.backend,
                plan.shots,
                derive_seed(base.seed, k as u64),
                &opts,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let mut outcomes = outcomes.into_iter();
    points
        .into_iter()
        .map(|point| {
            let cells = SDC_INPUTS
                .iter()
                .map(|l| (l.to_string(), outcomes.next().expect("one outcome per job")))
                .collect();
            score_sdc_point(point, cells)
        })
        .collect()
}

/// Scores one sweep point from the four input cells keyed by input label.
pub fn score_sdc_point(
    point: SweepPoint,
    cells: BTreeMap<String, CellOutcome>,
) -> Result<SdcPoint> {
    if let Some(extra) = cells.keys().find(|k| !SDC_INPUTS.contains(&k.as_str())) {
        return Err(Error::InvalidParameter(format!(
            "unexpected SDC cell `{extra}`"
        )));
    }
    let mut conditionals = BTreeMap::new();
    for label in SDC_INPUTS {
        let cell = cells
            .get(label)
            .ok_or_else(|| Error::MissingCell(label.to_string()))?;
        conditionals.insert(label.to_string(), cell.distribution.clone());
    }
    let joint = JointDistribution::uniform_inputs(&conditionals)?;
    Ok(SdcPoint {
        point,
        mutual_information: mutual_information(&joint),
        joint,
        cells,
    })
}
