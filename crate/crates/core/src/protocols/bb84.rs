use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use rayon::prelude::*;

use super::plan::{Aggregation, ExperimentPlan, Protocol};
use super::sweep::Sweep;
use super::{sweep_points, SweepPoint};
use crate::circuits::{Circuit, Gate, GateDurations, GateKind};
use crate::error::{Error, Result};
use crate::linalg::{c, ONE, ZERO};
use crate::metrics::{secret_key_length, CountsTable, KeyRateInput};
use crate::noise::NoiseModel;
use crate::simcore::{derive_seed, simulate, CellOutcome, PureState};
use crate::topology::{build_swap_chain, DeviceGraph, RoutePlan};

/// Cell labels: basis symbol then key bit.
pub const BB84_CELLS: [&str; 4] = ["+0", "x0", "+1", "x1"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// Computational basis.
    Plus,
    /// Hadamard basis.
    Cross,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Plus => "+",
            Basis::Cross => "x",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bb84Symbol {
    pub bit: u8,
    pub basis: Basis,
}

impl Bb84Symbol {
    pub fn new(bit: u8, basis: Basis) -> Result<Self> {
        if bit > 1 {
            return Err(Error::InvalidParameter(format!("key bit {bit}")));
        }
        Ok(Self { bit, basis })
    }

    pub fn parse(label: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("BB84 cell label `{label}`"));
        let mut chars = label.chars();
        let basis = match chars.next() {
            Some('+') => Basis::Plus,
            Some('x') => Basis::Cross,
            _ => return Err(bad()),
        };
        let bit = match (chars.next(), chars.next()) {
            (Some('0'), None) => 0,
            (Some('1'), None) => 1,
            _ => return Err(bad()),
        };
        Self::new(bit, basis)
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.basis, self.bit)
    }

    pub fn all() -> [Bb84Symbol; 4] {
        BB84_CELLS.map(|l| Self::parse(l).expect("valid label"))
    }
}

/// `[I or X]` then `[I or H]` on the carrier.
pub fn bb84_encode_single(
    sym: Bb84Symbol,
    target: &str,
    durations: &GateDurations,
) -> Result<Vec<Gate>> {
    let flip = if sym.bit == 1 {
        GateKind::X
    } else {
        GateKind::I
    };
    let rotate = match sym.basis {
        Basis::Plus => GateKind::I,
        Basis::Cross => GateKind::H,
    };
    Ok(vec![
        durations.gate(flip, target)?,
        durations.gate(rotate, target)?,
    ])
}

/// Noiseless single-qubit state for `sym`: |0>, |1>, |+>, |->.
pub fn single_target_state(sym: Bb84Symbol, label: &str) -> Result<PureState> {
    let s = c(FRAC_1_SQRT_2, 0.0);
    let amps = match (sym.basis, sym.bit) {
        (Basis::Plus, 0) => vec![ONE, ZERO],
        (Basis::Plus, _) => vec![ZERO, ONE],
        (Basis::Cross, 0) => vec![s, s],
        (Basis::Cross, _) => vec![s, -s],
    };
    PureState::from_amplitudes(vec![label.to_string()], amps)
}

/// Dual-rail target state over (rail A, rail B) with logical
/// `|0> = |10>` and `|1> = |01>`.
pub fn dualrail_target_state(sym: Bb84Symbol, rail_a: &str, rail_b: &str) -> Result<PureState> {
    let s = c(FRAC_1_SQRT_2, 0.0);
    // basis order |00>, |01>, |10>, |11>
    let amps = match (sym.basis, sym.bit) {
        (Basis::Plus, 0) => vec![ZERO, ZERO, ONE, ZERO],
        (Basis::Plus, _) => vec![ZERO, ONE, ZERO, ZERO],
        (Basis::Cross, 0) => vec![ZERO, s, s, ZERO],
        (Basis::Cross, _) => vec![ZERO, s, -s, ZERO],
    };
    PureState::from_amplitudes(vec![rail_a.to_string(), rail_b.to_string()], amps)
}

/// Prepares the dual-rail state of `sym`: single-rail encoding on A, then
/// `X_A X_B CNOT(A, B)` maps `|k>|0>` into the logical subspace.
pub fn bb84_encode_dualrail(
    sym: Bb84Symbol,
    rail_a: &str,
    rail_b: &str,
    graph: &DeviceGraph,
    durations: &GateDurations,
) -> Result<Vec<Gate>> {
    let mut gates = bb84_encode_single(sym, rail_a, durations)?;
    gates.push(durations.gate(GateKind::X, rail_a)?);
    gates.push(durations.gate(GateKind::X, rail_b)?);
    gates.extend(graph.cnot(rail_a, rail_b, durations)?);
    Ok(gates)
}

/// Logical Hadamard on the dual-rail pair.
fn dualrail_hadamard(
    rail_a: &str,
    rail_b: &str,
    graph: &DeviceGraph,
    d: &GateDurations,
) -> Result<Vec<Gate>> {
    let mut gates = graph.cnot(rail_a, rail_b, d)?;
    gates.push(d.gate(GateKind::X, rail_a)?);
    gates.push(d.gate(GateKind::H, rail_a)?);
    gates.push(d.gate(GateKind::X, rail_a)?);
    gates.extend(graph.cnot(rail_a, rail_b, d)?);
    Ok(gates)
}

fn check_bb84(plan: &ExperimentPlan, want: Protocol) -> Result<()> {
    plan.validate()?;
    if plan.protocol != want {
        return Err(Error::InvalidPlan(format!(
            "{:?} plan given to the {want:?} builder",
            plan.protocol
        )));
    }
    Ok(())
}

fn round_trip(
    circ: &mut Circuit,
    route: &RoutePlan,
    graph: &DeviceGraph,
    d: &GateDurations,
) -> Result<String> {
    if route.swap_count() % 2 == 1 {
        return Err(Error::InvalidPlan(format!(
            "BB84 round trip needs an even SWAP count, got {}",
            route.swap_count()
        )));
    }
    let out = build_swap_chain(&route.outbound, graph, d)?;
    let turn = out.payload_position(route.origin()).to_string();
    circ.extend(out.gates)?;
    let back = build_swap_chain(&route.inbound, graph, d)?;
    let last = back.payload_position(&turn).to_string();
    circ.extend(back.gates)?;
    Ok(last)
}

/// Encode, delay, even SWAP round trip, Bob's basis rotation, measure.
/// Bases are always matched, so every shot is part of the sifted key.
pub fn build_bb84_single(
    plan: &ExperimentPlan,
    sym: Bb84Symbol,
    graph: &DeviceGraph,
    noise: &NoiseModel,
) -> Result<Circuit> {
    check_bb84(plan, Protocol::Bb84Single)?;
    let d = &noise.durations;
    let carrier = plan.roles.carrier.as_str();
    let route = plan.resolve_route(graph)?;
    let mut circ = Circuit::new(route.nodes())?;
    circ.extend(bb84_encode_single(sym, carrier, d)?)?;
    circ.extend(crate::circuits::identity_train(
        carrier,
        plan.delay_gates,
        d.identity_ns,
    )?)?;
    let last = round_trip(&mut circ, &route, graph, d)?;
    let rotate = match sym.basis {
        Basis::Plus => GateKind::I,
        Basis::Cross => GateKind::H,
    };
    circ.push(d.gate(rotate, &last)?)?;
    circ.push(Gate::measure(&last)?)?;
    circ.metadata
        .insert("protocol".into(), "bb84-single".into());
    circ.metadata.insert("cell".into(), sym.label());
    circ.metadata
        .insert("swaps".into(), route.swap_count().to_string());
    circ.metadata
        .insert("delay_gates".into(), plan.delay_gates.to_string());
    Ok(circ)
}

/// Dual-rail variant: rails are the carrier (A) and its partner (B). SWAPs
/// exchange the rails; the cross basis is read out through a logical
/// Hadamard. Outcomes are `AB` bitstrings.
pub fn build_bb84_dualrail(
    plan: &ExperimentPlan,
    sym: Bb84Symbol,
    graph: &DeviceGraph,
    noise: &NoiseModel,
) -> Result<Circuit> {
    check_bb84(plan, Protocol::Bb84Dualrail)?;
    let d = &noise.durations;
    let (a, b) = (plan.roles.carrier.as_str(), plan.roles.partner.as_str());
    if a == b {
        return Err(Error::InvalidPlan(
            "dual-rail needs two distinct rails".into(),
        ));
    }
    let route = plan.resolve_route(graph)?;
    let mut circ = Circuit::new(vec![a.to_string(), b.to_string()])?;
    circ.extend(bb84_encode_dualrail(sym, a, b, graph, d)?)?;
    for _ in 0..plan.delay_gates {
        circ.push(d.gate(GateKind::I, a)?)?;
        circ.push(d.gate(GateKind::I, b)?)?;
    }
    round_trip(&mut circ, &route, graph, d)?;
    if sym.basis == Basis::Cross {
        circ.extend(dualrail_hadamard(a, b, graph, d)?)?;
    }
    circ.push(Gate::measure(a)?)?;
    circ.push(Gate::measure(b)?)?;
    circ.metadata
        .insert("protocol".into(), "bb84-dualrail".into());
    circ.metadata.insert("cell".into(), sym.label());
    circ.metadata
        .insert("swaps".into(), route.swap_count().to_string());
    circ.metadata
        .insert("delay_gates".into(), plan.delay_gates.to_string());
    Ok(circ)
}

pub fn build_bb84_circuit(
    plan: &ExperimentPlan,
    sym: Bb84Symbol,
    graph: &DeviceGraph,
    noise: &NoiseModel,
) -> Result<Circuit> {
    match plan.protocol {
        Protocol::Bb84Dualrail => build_bb84_dualrail(plan, sym, graph, noise),
        _ => build_bb84_single(plan, sym, graph, noise),
    }
}

/// Logical bit of a dual-rail outcome: `10 -> 0`, `01 -> 1`, else none.
pub fn decode_dualrail(outcome: &str) -> Option<u8> {
    match outcome {
        "10" => Some(0),
        "01" => Some(1),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectionResult {
    /// Accepted counts only, keyed by rail outcome.
    pub counts: CountsTable,
    pub accepted_fraction: f64,
}

impl PostSelectionResult {
    /// Accepted counts keyed by logical bit.
    pub fn decoded(&self) -> CountsTable {
        let counts = self
            .counts
            .counts()
            .iter()
            .filter_map(|(k, n)| decode_dualrail(k).map(|b| (b.to_string(), *n)))
            .collect();
        CountsTable::with_shots(counts, self.counts.shots()).expect("subset of counts")
    }
}

/// Drops `00` and `11` outcomes of a two-rail table.
pub fn postselect_dualrail(counts: &CountsTable) -> Result<PostSelectionResult> {
    if let Some(k) = counts.counts().keys().find(|k| k.len() != 2) {
        return Err(Error::InvalidParameter(format!(
            "outcome `{k}` is not over two rails"
        )));
    }
    let kept: BTreeMap<String, u64> = counts
        .counts()
        .iter()
        .filter(|(k, _)| decode_dualrail(k).is_some())
        .map(|(k, n)| (k.clone(), *n))
        .collect();
    let accepted: u64 = kept.values().sum();
    if accepted == 0 {
        return Err(Error::NoAcceptedShots);
    }
    let shots = counts.shots();
    Ok(PostSelectionResult {
        counts: CountsTable::with_shots(kept, shots)?,
        accepted_fraction: accepted as f64 / shots as f64,
    })
}

#[derive(Debug, Clone)]
pub struct Bb84Cell {
    pub qber: f64,
    pub accepted_fraction: f64,
    /// Accepted shots; fractional on the density backend.
    pub accepted_shots: f64,
    pub outcome: CellOutcome,
}

#[derive(Debug, Clone)]
pub struct Bb84Point {
    pub point: SweepPoint,
    /// Per cell label.
    pub cells: BTreeMap<String, Bb84Cell>,
    pub q: f64,
    /// Sifted key length: accepted shots over all four cells.
    pub sifted: f64,
    pub l_sec: f64,
    pub l_sec_per_n: f64,
    pub accepted_fraction: f64,
}

fn score_cell(sym: Bb84Symbol, protocol: Protocol, outcome: CellOutcome) -> Result<Bb84Cell> {
    let dist = &outcome.distribution;
    let (p_wrong, accepted_fraction) = match protocol {
        Protocol::Bb84Dualrail => {
            let (kept, mass) = dist.restrict(&["10", "01"])?;
            let wrong = if sym.bit == 0 { "01" } else { "10" };
            (kept.get(wrong), mass)
        }
        _ => (dist.get(if sym.bit == 0 { "1" } else { "0" }), 1.0),
    };
    let accepted_shots = match &outcome.counts {
        Some(counts) if protocol == Protocol::Bb84Dualrail => {
            postselect_dualrail(counts)?.counts.accepted() as f64
        }
        Some(counts) => counts.accepted() as f64,
        None => accepted_fraction * outcome.shots as f64,
    };
    Ok(Bb84Cell {
        qber: p_wrong,
        accepted_fraction,
        accepted_shots,
        outcome,
    })
}

/// Scores one sweep point from the four cell outcomes keyed by cell label.
pub fn score_bb84_point(
    point: SweepPoint,
    protocol: Protocol,
    aggregation: Aggregation,
    outcomes: BTreeMap<String, CellOutcome>,
) -> Result<Bb84Point> {
    if protocol == Protocol::Sdc {
        return Err(Error::InvalidPlan(
            "SDC outcomes given to the BB84 scorer".into(),
        ));
    }
    let mut outcomes = outcomes;
    let mut cells = BTreeMap::new();
    for label in BB84_CELLS {
        let outcome = outcomes
            .remove(label)
            .ok_or_else(|| Error::MissingCell(label.to_string()))?;
        let sym = Bb84Symbol::parse(label)?;
        cells.insert(label.to_string(), score_cell(sym, protocol, outcome)?);
    }
    if let Some(extra) = outcomes.keys().next() {
        return Err(Error::InvalidParameter(format!(
            "unexpected BB84 cell `{extra}`"
        )));
    }
    let sifted: f64 = cells.values().map(|c: &Bb84Cell| c.accepted_shots).sum();
    let q = match aggregation {
        Aggregation::Mean => cells.values().map(|c| c.qber).sum::<f64>() / cells.len() as f64,
        Aggregation::Weighted => {
            if sifted <= 0.0 {
                return Err(Error::NoAcceptedShots);
            }
            cells
                .values()
                .map(|c| c.qber * c.accepted_shots)
                .sum::<f64>()
                / sifted
        }
    };
    if q > 0.5 {
        log::warn!("aggregate q = {q:.4} above 0.5; key length evaluated at 0.5");
    }
    let total: f64 = cells.values().map(|c| c.outcome.shots as f64).sum();
    let l_sec = secret_key_length(&KeyRateInput::new(sifted, q.min(0.5)))?;
    Ok(Bb84Point {
        point,
        q,
        sifted,
        l_sec,
        l_sec_per_n: if sifted > 0.0 { l_sec / sifted } else { 0.0 },
        accepted_fraction: if total > 0.0 { sifted / total } else { 0.0 },
        cells,
    })
}

/// Runs the four (basis, bit) cells with equal shots at every sweep point
/// and scores q, l_sec and l_sec/N with N the sifted (accepted) length.
pub fn run_bb84_sweep(
    base: &ExperimentPlan,
    sweep: &Sweep,
    graph: &DeviceGraph,
    noise: &NoiseModel,
) -> Result<Vec<Bb84Point>> {
    base.validate()?;
    if base.protocol == Protocol::Sdc {
        return Err(Error::InvalidPlan(
            "SDC plan given to the BB84 sweep".into(),
        ));
    }
    let points = sweep_points(base, sweep, noise)?;
    let opts = base.sim_options();
    let jobs: Vec<(usize, Bb84Symbol)> = (0..points.len())
        .flat_map(|p| Bb84Symbol::all().map(|s| (p, s)))
        .collect();
    let outcomes = jobs
        .par_iter()
        .enumerate()
        .map(|(k, (p, sym))| {
            let mut plan = base.clone();
            plan.swaps = points[*p].swaps;
            plan.delay_gates = points[*p].delay_gates;
            let circ = build_bb84_circuit(&plan, *sym, graph, noise)?;
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
            let cells = BB84_CELLS
                .iter()
                .map(|l| (l.to_string(), outcomes.next().expect("one outcome per job")))
                .collect();
            score_bb84_point(point, base.protocol, base.aggregation, cells)
        })
        .collect()
}
