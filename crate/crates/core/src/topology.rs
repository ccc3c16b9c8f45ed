//! Device coupling graphs, path finding and SWAP-chain routing.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuits::{decompose_swap, oriented_cnot, CnotDirection, Gate, GateDurations};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDuration {
    pub control: String,
    pub target: String,
    pub cnot_ns: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviceFile {
    name: String,
    #[serde(default)]
    allow_reversal: bool,
    nodes: Vec<String>,
    edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    rows: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    edge_durations: Vec<EdgeDuration>,
}

/// A device coupling map. Edges are directed `control -> target`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceGraph {
    name: String,
    nodes: Vec<String>,
    edges: BTreeSet<(String, String)>,
    allow_reversal: bool,
    rows: Vec<Vec<String>>,
    cnot_overrides: BTreeMap<(String, String), f64>,
}

impl DeviceGraph {
    pub fn new(
        name: impl Into<String>,
        nodes: Vec<String>,
        edges: impl IntoIterator<Item = (String, String)>,
        allow_reversal: bool,
    ) -> Result<Self> {
        let graph = Self {
            name: name.into(),
            nodes,
            edges: edges.into_iter().collect(),
            allow_reversal,
            rows: Vec::new(),
            cnot_overrides: BTreeMap::new(),
        };
        graph.validate()?;
        Ok(graph)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: DeviceFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let graph = Self {
            name: file.name,
            nodes: file.nodes,
            edges: file.edges.into_iter().map(|[a, b]| (a, b)).collect(),
            allow_reversal: file.allow_reversal,
            rows: file.rows,
            cnot_overrides: file
                .edge_durations
                .into_iter()
                .map(|e| ((e.control, e.target), e.cnot_ns))
                .collect(),
        };
        graph.validate()?;
        Ok(graph)
    }

    pub fn bundled(name: &str) -> Result<Self> {
        let text = match name {
            "ibmqx4" => include_str!("../devices/ibmqx4.toml"),
            "ibmqx5" => include_str!("../devices/ibmqx5.toml"),
            "line2" => include_str!("../devices/line2.toml"),
            other => return Err(Error::Config(format!("no bundled device `{other}`"))),
        };
        Self::from_toml_str(text)
    }

    pub fn bundled_names() -> &'static [&'static str] {
        &["ibmqx4", "ibmqx5", "line2"]
    }

    fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(Error::InvalidDevice("no nodes".into()));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if self.nodes[..i].contains(n) {
                return Err(Error::InvalidDevice(format!("duplicate node `{n}`")));
            }
        }
        for (a, b) in &self.edges {
            if a == b {
                return Err(Error::InvalidDevice(format!("self-loop on `{a}`")));
            }
            for end in [a, b] {
                if !self.contains(end) {
                    return Err(Error::InvalidDevice(format!(
                        "edge {a} -> {b} references unknown node `{end}`"
                    )));
                }
            }
        }
        for row in &self.rows {
            if let Some(n) = row.iter().find(|n| !self.contains(n)) {
                return Err(Error::InvalidDevice(format!(
                    "row references unknown node `{n}`"
                )));
            }
        }
        for ((a, b), ns) in &self.cnot_overrides {
            if !self.edges.contains(&(a.clone(), b.clone())) {
                return Err(Error::InvalidDevice(format!(
                    "duration override for missing edge {a} -> {b}"
                )));
            }
            if !(*ns >= 0.0 && ns.is_finite()) {
                return Err(Error::InvalidDevice(format!(
                    "CNOT duration {ns} on {a} -> {b}"
                )));
            }
        }
        let reached = self.distances(&self.nodes[0]);
        if let Some(n) = self.nodes.iter().find(|n| !reached.contains_key(*n)) {
            return Err(Error::InvalidDevice(format!(
                "graph is disconnected (`{n}` unreachable from `{}`)",
                self.nodes[0]
            )));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn allow_reversal(&self) -> bool {
        self.allow_reversal
    }

    /// Physical rows in layout order, if the config declares them.
    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn contains(&self, node: &str) -> bool {
        self.nodes.iter().any(|n| n == node)
    }

    fn require(&self, node: &str) -> Result<()> {
        if self.contains(node) {
            Ok(())
        } else {
            Err(Error::UnknownQubit(node.to_string()))
        }
    }

    /// Undirected neighbours, sorted by label.
    pub fn neighbors(&self, node: &str) -> Vec<&str> {
        let set: BTreeSet<&str> = self
            .edges
            .iter()
            .filter_map(|(a, b)| {
                if a == node {
                    Some(b.as_str())
                } else if b == node {
                    Some(a.as_str())
                } else {
                    None
                }
            })
            .collect();
        set.into_iter().collect()
    }

    pub fn direction(&self, a: &str, b: &str) -> Option<CnotDirection> {
        let fwd = self.edges.contains(&(a.to_string(), b.to_string()));
        let back = self.edges.contains(&(b.to_string(), a.to_string()));
        match (fwd, back) {
            (true, true) => Some(CnotDirection::Both),
            (true, false) => Some(CnotDirection::AToB),
            (false, true) => Some(CnotDirection::BToA),
            (false, false) => None,
        }
    }

    fn distances(&self, from: &str) -> BTreeMap<String, usize> {
        let mut dist = BTreeMap::from([(from.to_string(), 0usize)]);
        let mut queue = VecDeque::from([from.to_string()]);
        while let Some(n) = queue.pop_front() {
            let d = dist[&n];
            for m in self.neighbors(&n) {
                if !dist.contains_key(m) {
                    dist.insert(m.to_string(), d + 1);
                    queue.push_back(m.to_string());
                }
            }
        }
        dist
    }

    /// Durations with the CNOT time of the coupling between `a` and `b`.
    fn durations_for(&self, a: &str, b: &str, base: &GateDurations) -> GateDurations {
        let over = self
            .cnot_overrides
            .get(&(a.to_string(), b.to_string()))
            .or_else(|| self.cnot_overrides.get(&(b.to_string(), a.to_string())));
        GateDurations {
            cnot_ns: over.copied().unwrap_or(base.cnot_ns),
            ..*base
        }
    }

    fn check_reversal(&self, a: &str, b: &str, dir: CnotDirection, forward: bool) -> Result<()> {
        let native = dir == CnotDirection::Both || (dir == CnotDirection::AToB) == forward;
        if native || self.allow_reversal {
            Ok(())
        } else {
            Err(Error::InvalidDevice(format!(
                "{}: CNOT {a} -> {b} needs a reversed coupling and reversal is disabled",
                self.name
            )))
        }
    }

    /// CNOT honoring the coupling direction; H-wrapped when only the reverse
    /// coupling exists.
    pub fn cnot(
        &self,
        control: &str,
        target: &str,
        durations: &GateDurations,
    ) -> Result<Vec<Gate>> {
        self.require(control)?;
        self.require(target)?;
        let dir = self.direction(control, target).ok_or_else(|| {
            Error::RouteMismatch(format!("{control} and {target} are not coupled"))
        })?;
        self.check_reversal(control, target, dir, true)?;
        let d = self.durations_for(control, target, durations);
        oriented_cnot(control, target, dir != CnotDirection::BToA, &d)
    }

    /// SWAP between two coupled nodes.
    pub fn swap(&self, a: &str, b: &str, durations: &GateDurations) -> Result<Vec<Gate>> {
        let dir = self
            .direction(a, b)
            .ok_or_else(|| Error::RouteMismatch(format!("{a} and {b} are not coupled")))?;
        if dir != CnotDirection::Both && !self.allow_reversal {
            return Err(Error::InvalidDevice(format!(
                "{}: SWAP {a} <-> {b} needs a reversed CNOT and reversal is disabled",
                self.name
            )));
        }
        decompose_swap(a, b, dir, &self.durations_for(a, b, durations))
    }
}

pub fn load_device(path: &Path) -> Result<DeviceGraph> {
    DeviceGraph::from_toml_str(&std::fs::read_to_string(path)?)
}

/// Shortest undirected path, ties broken towards the lexicographically
/// smallest label at each step. Nodes in `avoid` are never entered.
pub fn find_path(graph: &DeviceGraph, from: &str, to: &str) -> Result<Vec<String>> {
    find_path_avoiding(graph, from, to, &[])
}

pub fn find_path_avoiding(
    graph: &DeviceGraph,
    from: &str,
    to: &str,
    avoid: &[&str],
) -> Result<Vec<String>> {
    graph.require(from)?;
    graph.require(to)?;
    // distances to `to` over the allowed subgraph
    let mut dist = BTreeMap::from([(to, 0usize)]);
    let mut queue = VecDeque::from([to]);
    while let Some(n) = queue.pop_front() {
        let d = dist[n];
        for m in graph.neighbors(n) {
            if !avoid.contains(&m) && !dist.contains_key(m) {
                dist.insert(m, d + 1);
                queue.push_back(m);
            }
        }
    }
    let unreachable = || Error::Unreachable {
        from: from.to_string(),
        to: to.to_string(),
    };
    if avoid.contains(&to) {
        return Err(unreachable());
    }
    let mut here = from;
    let mut path = vec![from.to_string()];
    let mut left = *dist.get(from).ok_or_else(unreachable)?;
    while left > 0 {
        here = graph
            .neighbors(here)
            .into_iter()
            .find(|m| dist.get(m) == Some(&(left - 1)))
            .ok_or_else(unreachable)?;
        path.push(here.to_string());
        left -= 1;
    }
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Leg {
    Outbound,
    Return,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReturnPath {
    Same,
    Alternate,
}

/// Round trip of a payload qubit: out along `outbound`, back along
/// `inbound`. `inbound` starts where `outbound` ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoutePlan {
    pub outbound: Vec<String>,
    pub inbound: Vec<String>,
    pub return_path: ReturnPath,
}

impl RoutePlan {
    /// No movement: the payload stays on `node`.
    pub fn stationary(node: &str) -> Self {
        Self {
            outbound: vec![node.to_string()],
            inbound: vec![node.to_string()],
            return_path: ReturnPath::Same,
        }
    }

    /// Out along `path`, back along its reverse.
    pub fn retrace(path: Vec<String>) -> Self {
        let inbound = path.iter().rev().cloned().collect();
        Self {
            outbound: path,
            inbound,
            return_path: ReturnPath::Same,
        }
    }

    pub fn leg(&self, leg: Leg) -> &[String] {
        match leg {
            Leg::Outbound => &self.outbound,
            Leg::Return => &self.inbound,
        }
    }

    pub fn leg_swaps(&self, leg: Leg) -> usize {
        self.leg(leg).len().saturating_sub(1)
    }

    pub fn swap_count(&self) -> usize {
        self.leg_swaps(Leg::Outbound) + self.leg_swaps(Leg::Return)
    }

    pub fn origin(&self) -> &str {
        &self.outbound[0]
    }

    /// Node holding the payload between the two legs.
    pub fn turnaround(&self) -> &str {
        self.outbound.last().expect("nonempty leg")
    }

    pub fn destination(&self) -> &str {
        self.inbound.last().expect("nonempty leg")
    }

    /// Every node the plan touches, in first-visit order.
    pub fn nodes(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for n in self.outbound.iter().chain(&self.inbound) {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        out
    }

    pub fn validate(&self, graph: &DeviceGraph) -> Result<()> {
        if self.outbound.is_empty() || self.inbound.is_empty() {
            return Err(Error::RouteMismatch("empty route leg".into()));
        }
        if self.inbound[0] != *self.turnaround() {
            return Err(Error::RouteMismatch(format!(
                "return leg starts at {} but the outbound leg ends at {}",
                self.inbound[0],
                self.turnaround()
            )));
        }
        for leg in [&self.outbound, &self.inbound] {
            for n in leg.iter() {
                if !graph.contains(n) {
                    return Err(Error::RouteMismatch(format!(
                        "node `{n}` is not on device {}",
                        graph.name()
                    )));
                }
            }
            for w in leg.windows(2) {
                if graph.direction(&w[0], &w[1]).is_none() {
                    return Err(Error::RouteMismatch(format!(
                        "{} and {} are not adjacent on {}",
                        w[0],
                        w[1],
                        graph.name()
                    )));
                }
            }
        }
        Ok(())
    }
}

fn require_rows(graph: &DeviceGraph, n: usize) -> Result<&[Vec<String>]> {
    let rows = graph.rows();
    if rows.len() < n {
        return Err(Error::InvalidDevice(format!(
            "{} declares {} row(s), route needs {n}",
            graph.name(),
            rows.len()
        )));
    }
    Ok(rows)
}

fn check_even(swaps: usize) -> Result<usize> {
    if swaps % 2 == 1 {
        return Err(Error::InvalidPlan(format!(
            "round trip needs an even SWAP count, got {swaps}"
        )));
    }
    Ok(swaps / 2)
}

/// Out along the first row from its first node, back the same way.
pub fn upper_row_route(graph: &DeviceGraph, swaps: usize) -> Result<RoutePlan> {
    let row = &require_rows(graph, 1)?[0];
    let hops = check_even(swaps)?;
    if hops >= row.len() {
        return Err(Error::InvalidPlan(format!(
            "{swaps} SWAPs exceed the {}-node upper row",
            row.len()
        )));
    }
    let plan = RoutePlan::retrace(row[..=hops].to_vec());
    plan.validate(graph)?;
    Ok(plan)
}

/// Out along the first row for `swaps / 2` hops, down that column, then
/// back along the second row to column 1, next to the second row's first
/// node.
pub fn both_rows_route(graph: &DeviceGraph, swaps: usize) -> Result<RoutePlan> {
    let rows = require_rows(graph, 2)?;
    let hops = check_even(swaps)?;
    if hops == 0 {
        return Ok(RoutePlan::stationary(&rows[0][0]));
    }
    let (upper, lower) = (&rows[0], &rows[1]);
    if hops >= upper.len().min(lower.len()) {
        return Err(Error::InvalidPlan(format!(
            "{swaps} SWAPs exceed the two-row layout of {}",
            graph.name()
        )));
    }
    let mut inbound = vec![upper[hops].clone()];
    inbound.extend(lower[1..=hops].iter().rev().cloned());
    let plan = RoutePlan {
        outbound: upper[..=hops].to_vec(),
        inbound,
        return_path: ReturnPath::Alternate,
    };
    plan.validate(graph)?;
    Ok(plan)
}

/// `swaps` SWAPs between `carrier` and `partner`, half out and half back.
pub fn shuttle_route(
    graph: &DeviceGraph,
    carrier: &str,
    partner: &str,
    swaps: usize,
) -> Result<RoutePlan> {
    let hops = check_even(swaps)?;
    let walk = |start: &str, other: &str, n: usize| -> Vec<String> {
        (0..=n)
            .map(|i| if i % 2 == 0 { start } else { other }.to_string())
            .collect()
    };
    let outbound = walk(carrier, partner, hops);
    let turn = outbound.last().expect("nonempty").clone();
    let other = if turn == carrier { partner } else { carrier };
    let plan = RoutePlan {
        inbound: walk(&turn, other, hops),
        outbound,
        return_path: ReturnPath::Same,
    };
    plan.validate(graph)?;
    Ok(plan)
}

/// Gates of one route leg plus where each state ended up.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapChain {
    pub gates: Vec<Gate>,
    pub swaps: usize,
    /// Original holder of each state -> physical node holding it now.
    pub placement: BTreeMap<String, String>,
}

impl SwapChain {
    /// Physical node now holding the state that started on `path[0]`.
    pub fn payload_position(&self, origin: &str) -> &str {
        &self.placement[origin]
    }
}

/// SWAPs between consecutive nodes of `path`, moving the state on
/// `path[0]` to the last node.
pub fn build_swap_chain(
    path: &[String],
    graph: &DeviceGraph,
    durations: &GateDurations,
) -> Result<SwapChain> {
    if path.is_empty() {
        return Err(Error::RouteMismatch("empty path".into()));
    }
    let mut placement: BTreeMap<String, String> =
        path.iter().map(|n| (n.clone(), n.clone())).collect();
    let mut gates = Vec::new();
    for w in path.windows(2) {
        gates.extend(graph.swap(&w[0], &w[1], durations)?);
        for holder in placement.values_mut() {
            if *holder == w[0] {
                *holder = w[1].clone();
            } else if *holder == w[1] {
                *holder = w[0].clone();
            }
        }
    }
    Ok(SwapChain {
        gates,
        swaps: path.len() - 1,
        placement,
    })
}
