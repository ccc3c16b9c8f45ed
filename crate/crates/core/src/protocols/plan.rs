use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sweep::{Sweep, SweepAxis};
use crate::error::{Error, Result};
use crate::simcore::{Backend, SimOptions};
use crate::topology::{both_rows_route, shuttle_route, upper_row_route, DeviceGraph, RoutePlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    Sdc,
    Bb84Single,
    Bb84Dualrail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RouteKind {
    /// The payload does not move.
    #[default]
    Stationary,
    /// Out along the device's first row and back the same way.
    UpperRow,
    /// Out along the first row, back along the second.
    BothRows,
    /// Back and forth between the carrier and its partner.
    Shuttle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Mitigation {
    #[serde(default)]
    pub phase_correction: bool,
    #[serde(default)]
    pub dual_rail: bool,
}

/// How the four BB84 cell error rates combine into one q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    #[default]
    Mean,
    /// Weighted by accepted shots per cell.
    Weighted,
}

/// Physical qubits playing each protocol role.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Roles {
    /// Bob's stored half of the Bell pair.
    pub stored: String,
    /// The half sent to Alice.
    pub payload: String,
    /// BB84 carrier, or rail A of the dual-rail pair.
    pub carrier: String,
    /// SWAP partner of the carrier, or rail B.
    pub partner: String,
}

impl Default for Roles {
    fn default() -> Self {
        Self {
            stored: "Q0".into(),
            payload: "Q1".into(),
            carrier: "Q0".into(),
            partner: "Q1".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub grid: String,
}

impl SweepSpec {
    pub fn parse(&self) -> Result<Sweep> {
        Sweep::parse(self.axis, &self.grid)
    }
}

fn default_shots() -> u64 {
    8192
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub protocol: Protocol,
    #[serde(default)]
    pub route: RouteKind,
    #[serde(default)]
    pub swaps: usize,
    /// Explicit legs; overrides `route` and `swaps`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_route: Option<RoutePlan>,
    #[serde(default)]
    pub delay_gates: usize,
    #[serde(default)]
    pub mitigation: Mitigation,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub retire_idle: bool,
    #[serde(default)]
    pub aggregation: Aggregation,
    #[serde(default)]
    pub roles: Roles,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

impl ExperimentPlan {
    pub fn new(protocol: Protocol) -> Self {
        Self {
            protocol,
            route: RouteKind::default(),
            swaps: 0,
            custom_route: None,
            delay_gates: 0,
            mitigation: Mitigation {
                phase_correction: false,
                dual_rail: protocol == Protocol::Bb84Dualrail,
            },
            shots: default_shots(),
            seed: 0,
            backend: Backend::default(),
            retire_idle: false,
            aggregation: Aggregation::default(),
            roles: Roles::default(),
            sweep: None,
        }
    }

    pub fn sdc() -> Self {
        Self::new(Protocol::Sdc)
    }

    pub fn bb84_single() -> Self {
        Self::new(Protocol::Bb84Single)
    }

    pub fn bb84_dualrail() -> Self {
        Self::new(Protocol::Bb84Dualrail)
    }

    pub fn with_route(mut self, route: RouteKind, swaps: usize) -> Self {
        self.route = route;
        self.swaps = swaps;
        self
    }

    pub fn with_delay(mut self, gates: usize) -> Self {
        self.delay_gates = gates;
        self
    }

    pub fn with_phase_correction(mut self, on: bool) -> Self {
        self.mitigation.phase_correction = on;
        self
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_shots(mut self, shots: u64, seed: u64) -> Self {
        self.shots = shots;
        self.seed = seed;
        self
    }

    pub fn sim_options(&self) -> SimOptions {
        SimOptions {
            retire_idle: self.retire_idle,
            ..SimOptions::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::InvalidPlan("shots must be at least 1".into()));
        }
        if self.mitigation.dual_rail != (self.protocol == Protocol::Bb84Dualrail) {
            return Err(Error::InvalidPlan(
                "mitigation.dual_rail must be set exactly for the bb84-dualrail protocol".into(),
            ));
        }
        if self.mitigation.phase_correction && self.protocol != Protocol::Sdc {
            return Err(Error::InvalidPlan(
                "phase correction applies to superdense coding only".into(),
            ));
        }
        if self.route == RouteKind::Stationary && self.swaps != 0 && self.custom_route.is_none() {
            return Err(Error::InvalidPlan(format!(
                "{} SWAPs requested on a stationary route",
                self.swaps
            )));
        }
        if self.protocol != Protocol::Sdc {
            let total = self
                .custom_route
                .as_ref()
                .map_or(self.swaps, |r| r.swap_count());
            if total % 2 == 1 {
                return Err(Error::InvalidPlan(format!(
                    "BB84 round trip needs an even SWAP count, got {total}"
                )));
            }
        }
        if self.protocol == Protocol::Bb84Dualrail
            && (self.custom_route.is_some()
                || !matches!(self.route, RouteKind::Stationary | RouteKind::Shuttle))
        {
            return Err(Error::InvalidPlan(
                "dual-rail SWAPs run between the two rails (route = shuttle)".into(),
            ));
        }
        if let Some(s) = &self.sweep {
            s.parse()?;
        }
        Ok(())
    }

    /// Payload origin for this protocol.
    pub fn origin(&self) -> &str {
        match self.protocol {
            Protocol::Sdc => &self.roles.payload,
            _ => &self.roles.carrier,
        }
    }

    pub fn resolve_route(&self, graph: &DeviceGraph) -> Result<RoutePlan> {
        let origin = self.origin();
        let plan = match &self.custom_route {
            Some(r) => {
                r.validate(graph)?;
                r.clone()
            }
            None => match self.route {
                RouteKind::Stationary => RoutePlan::stationary(origin),
                RouteKind::UpperRow => upper_row_route(graph, self.swaps)?,
                RouteKind::BothRows => both_rows_route(graph, self.swaps)?,
                RouteKind::Shuttle => {
                    shuttle_route(graph, origin, &self.roles.partner, self.swaps)?
                }
            },
        };
        if plan.origin() != origin {
            return Err(Error::RouteMismatch(format!(
                "route starts at {} but the payload is on {origin}",
                plan.origin()
            )));
        }
        if !graph.contains(origin) {
            return Err(Error::RouteMismatch(format!(
                "`{origin}` is not on device {}",
                graph.name()
            )));
        }
        Ok(plan)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let plan: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("plan serializes")
    }
}
