//! Device noise: damping and depolarizing channels, readout confusion, and
//! the coherent phase drift with its correcting gate.
//!
//! Times follow the hardware convention: gate durations in nanoseconds,
//! relaxation times and the drift period scale in microseconds.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circuits::{gate_matrix, Gate, GateDurations, GateKind};
use crate::error::{Error, Result};
use crate::linalg::{c, kron, paulis, CMatrix, ONE, ZERO};
use crate::simcore::KrausChannel;

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}

/// Amplitude damping with `gamma = 1 - exp(-t/T1)` followed by the pure
/// dephasing needed for coherences to decay as `exp(-t/T2)`.
pub fn damping_channel(duration_ns: f64, t1_us: f64, t2_us: f64) -> Result<KrausChannel> {
    if !(t1_us > 0.0 && t2_us > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "relaxation times must be positive (T1 = {t1_us}, T2 = {t2_us})"
        )));
    }
    if t2_us > 2.0 * t1_us {
        return Err(Error::Unphysical {
            t1: t1_us,
            t2: t2_us,
        });
    }
    if duration_ns < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "duration {duration_ns} ns"
        )));
    }
    let t = duration_ns * 1e-3;
    let gamma = if t.is_infinite() {
        1.0
    } else {
        -(-t / t1_us).exp_m1()
    };
    // 1/T_phi = 1/T2 - 1/(2 T1) >= 0
    let rate_phi = (1.0 / t2_us - 0.5 / t1_us).max(0.0);
    let keep_phase = if t.is_infinite() {
        if rate_phi > 0.0 {
            0.0
        } else {
            1.0
        }
    } else {
        (-t * rate_phi).exp()
    };
    let lambda = 1.0 - keep_phase * keep_phase;

    let k0 = CMatrix::from_row_slice(
        2,
        2,
        &[
            ONE,
            ZERO,
            ZERO,
            c(((1.0 - gamma) * (1.0 - lambda)).sqrt(), 0.0),
        ],
    );
    let k1 = CMatrix::from_row_slice(2, 2, &[ZERO, c(gamma.sqrt(), 0.0), ZERO, ZERO]);
    let k2 = CMatrix::from_row_slice(
        2,
        2,
        &[ZERO, ZERO, ZERO, c(((1.0 - gamma) * lambda).sqrt(), 0.0)],
    );
    Ok(KrausChannel::new(vec![k0, k1, k2], 1)?.pruned())
}

/// With probability `p` one of the `4^arity - 1` non-identity Paulis,
/// chosen uniformly, is applied.
pub fn depolarizing_channel(p: f64, arity: usize) -> Result<KrausChannel> {
    if !(1..=2).contains(&arity) {
        return Err(Error::InvalidParameter(format!(
            "depolarizing arity {arity} (expected 1 or 2)"
        )));
    }
    check_probability("p", p)?;
    let singles = paulis();
    let strings: Vec<CMatrix> = if arity == 1 {
        singles.to_vec()
    } else {
        singles
            .iter()
            .flat_map(|a| singles.iter().map(move |b| kron(a, b)))
            .collect()
    };
    let others = (strings.len() - 1) as f64;
    let ops = strings
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let w = if i == 0 { 1.0 - p } else { p / others };
            m * c(w.sqrt(), 0.0)
        })
        .collect();
    Ok(KrausChannel::new(ops, arity)?.pruned())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DriftAccrual {
    /// Phase accumulates only while the target idles in identity gates.
    #[default]
    Identity,
    /// Phase accumulates during every gate acting on the target.
    AllGates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoherentDrift {
    pub t_osc_us: f64,
    pub target: String,
    #[serde(default)]
    pub accrual: DriftAccrual,
}

impl CoherentDrift {
    pub fn new(t_osc_us: f64, target: impl Into<String>) -> Result<Self> {
        let drift = Self {
            t_osc_us,
            target: target.into(),
            accrual: DriftAccrual::Identity,
        };
        drift.validate()?;
        Ok(drift)
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_osc_us > 0.0 && self.t_osc_us.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "t_osc must be positive, got {}",
                self.t_osc_us
            )));
        }
        Ok(())
    }

    /// Relative phase accumulated over `duration_ns`.
    pub fn phase(&self, duration_ns: f64) -> f64 {
        PI * duration_ns * 1e-3 / self.t_osc_us
    }

    pub fn accrues_during(&self, gate: &Gate) -> bool {
        gate.targets.contains(&self.target)
            && match self.accrual {
                DriftAccrual::Identity => gate.kind == GateKind::I,
                DriftAccrual::AllGates => gate.kind != GateKind::Barrier,
            }
    }
}

/// `diag(1, e^{i pi t / t_osc})`.
pub fn drift_phase(duration_ns: f64, drift: &CoherentDrift) -> CMatrix {
    gate_matrix(GateKind::Phase(drift.phase(duration_ns))).expect("phase gate is unitary")
}

/// Angle of the correcting `U(phi)` after `elapsed_ns` of drift.
pub fn correction_angle(elapsed_ns: f64, t_osc_us: f64) -> f64 {
    let phi = -PI * elapsed_ns * 1e-3 / t_osc_us;
    if phi == 0.0 {
        0.0
    } else {
        phi
    }
}

/// `diag(1, e^{-i pi t / t_osc})`, the exact inverse of `drift_phase`.
pub fn correction_gate(elapsed_ns: f64, drift: &CoherentDrift) -> CMatrix {
    gate_matrix(GateKind::Phase(correction_angle(
        elapsed_ns,
        drift.t_osc_us,
    )))
    .expect("phase gate is unitary")
}

/// Classical confusion of one qubit's readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutError {
    /// P(read 1 | state 0).
    pub e0: f64,
    /// P(read 0 | state 1).
    pub e1: f64,
}

impl ReadoutError {
    pub const IDEAL: ReadoutError = ReadoutError { e0: 0.0, e1: 0.0 };

    fn validate(&self) -> Result<()> {
        check_probability("e0", self.e0)?;
        check_probability("e1", self.e1)
    }

    /// P(read `read` | state `actual`).
    pub fn prob(&self, actual: bool, read: bool) -> f64 {
        match (actual, read) {
            (false, false) => 1.0 - self.e0,
            (false, true) => self.e0,
            (true, false) => self.e1,
            (true, true) => 1.0 - self.e1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReadoutModel {
    pub default: Option<ReadoutError>,
    pub per_qubit: BTreeMap<String, ReadoutError>,
}

impl ReadoutModel {
    pub fn ideal() -> Self {
        Self::uniform(ReadoutError::IDEAL)
    }

    pub fn uniform(err: ReadoutError) -> Self {
        Self {
            default: Some(err),
            per_qubit: BTreeMap::new(),
        }
    }

    pub fn for_qubit(&self, q: &str) -> Result<ReadoutError> {
        self.per_qubit
            .get(q)
            .copied()
            .or(self.default)
            .ok_or_else(|| Error::MissingReadout(q.to_string()))
    }

    fn validate(&self) -> Result<()> {
        self.default
            .iter()
            .chain(self.per_qubit.values())
            .try_for_each(ReadoutError::validate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relaxation {
    pub t1_us: f64,
    pub t2_us: f64,
}

impl Relaxation {
    fn validate(&self) -> Result<()> {
        damping_channel(0.0, self.t1_us, self.t2_us).map(|_| ())
    }
}

/// Per-gate noise in application order.
#[derive(Debug, Clone)]
pub enum NoiseOp {
    Channel(KrausChannel, Vec<String>),
    Unitary(CMatrix, String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub name: String,
    /// Relaxation for qubits without an entry in `relaxation`; `None` means
    /// no damping.
    pub default_relaxation: Option<Relaxation>,
    pub relaxation: BTreeMap<String, Relaxation>,
    pub p1q: f64,
    pub p2q: f64,
    /// Whether identity gates also receive `p1q` depolarizing noise.
    pub depolarize_identity: bool,
    pub readout: ReadoutModel,
    pub drift: Option<CoherentDrift>,
    pub durations: GateDurations,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self {
            name: "noiseless".into(),
            default_relaxation: None,
            relaxation: BTreeMap::new(),
            p1q: 0.0,
            p2q: 0.0,
            depolarize_identity: false,
            readout: ReadoutModel::ideal(),
            drift: None,
            durations: GateDurations::default(),
        }
    }

    /// The default pack: T1 = T2 = 40 us, p1q = 0.002, p2q = 0.03,
    /// readout (0.03, 0.06), drift period scale 10 us on `Q0`.
    pub fn ibmqx5_2018() -> Self {
        Self::bundled("ibmqx5-2018").expect("bundled pack parses")
    }

    /// Only the coherent drift, everything else ideal.
    pub fn drift_only(t_osc_us: f64, target: &str) -> Result<Self> {
        Ok(Self {
            name: "drift-only".into(),
            drift: Some(CoherentDrift::new(t_osc_us, target)?),
            ..Self::noiseless()
        })
    }

    pub fn bundled(name: &str) -> Result<Self> {
        let text = match name {
            "ibmqx5-2018" => include_str!("../packs/ibmqx5-2018.toml"),
            "noiseless" => include_str!("../packs/noiseless.toml"),
            other => return Err(Error::Config(format!("no bundled noise pack `{other}`"))),
        };
        Self::from_toml_str(text)
    }

    pub fn bundled_names() -> &'static [&'static str] {
        &["ibmqx5-2018", "noiseless"]
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: NoiseFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let model = file.into_model();
        model.validate()?;
        Ok(model)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&NoiseFile::from_model(self)).expect("noise model serializes")
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("p1q", self.p1q)?;
        check_probability("p2q", self.p2q)?;
        self.default_relaxation
            .iter()
            .chain(self.relaxation.values())
            .try_for_each(Relaxation::validate)?;
        self.readout.validate()?;
        if let Some(d) = &self.drift {
            d.validate()?;
        }
        self.durations.validate()
    }

    pub fn relaxation_for(&self, q: &str) -> Option<Relaxation> {
        self.relaxation.get(q).copied().or(self.default_relaxation)
    }

    /// Noise following `gate`: depolarizing, then damping on each target for
    /// the gate duration, then drift phase.
    pub fn ops_for(&self, gate: &Gate) -> Result<Vec<NoiseOp>> {
        let mut ops = Vec::new();
        if !gate.kind.is_unitary() {
            return Ok(ops);
        }
        let p = match gate.kind {
            GateKind::Cnot => self.p2q,
            GateKind::I if !self.depolarize_identity => 0.0,
            _ => self.p1q,
        };
        if p > 0.0 {
            ops.push(NoiseOp::Channel(
                depolarizing_channel(p, gate.targets.len())?,
                gate.targets.clone(),
            ));
        }
        if gate.duration_ns > 0.0 {
            for t in &gate.targets {
                if let Some(r) = self.relaxation_for(t) {
                    ops.push(NoiseOp::Channel(
                        damping_channel(gate.duration_ns, r.t1_us, r.t2_us)?,
                        vec![t.clone()],
                    ));
                }
            }
            if let Some(drift) = self.drift.as_ref().filter(|d| d.accrues_during(gate)) {
                ops.push(NoiseOp::Unitary(
                    drift_phase(gate.duration_ns, drift),
                    drift.target.clone(),
                ));
            }
        }
        Ok(ops)
    }
}

// On-disk schema of a noise parameter file.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseFile {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t1_us: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t2_us: Option<f64>,
    #[serde(default)]
    p1q: f64,
    #[serde(default)]
    p2q: f64,
    #[serde(default)]
    depolarize_identity: bool,
    #[serde(default)]
    readout: ReadoutFile,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    qubits: BTreeMap<String, Relaxation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    drift: Option<CoherentDrift>,
    #[serde(default)]
    durations: GateDurations,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReadoutFile {
    #[serde(default)]
    e0: f64,
    #[serde(default)]
    e1: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    qubits: BTreeMap<String, ReadoutError>,
}

impl NoiseFile {
    fn into_model(self) -> NoiseModel {
        let default_relaxation = match (self.t1_us, self.t2_us) {
            (Some(t1_us), Some(t2_us)) => Some(Relaxation { t1_us, t2_us }),
            (Some(t1_us), None) => Some(Relaxation {
                t1_us,
                t2_us: t1_us,
            }),
            (None, Some(t2_us)) => Some(Relaxation {
                t1_us: f64::NAN,
                t2_us,
            }),
            (None, None) => None,
        };
        NoiseModel {
            name: self.name,
            default_relaxation,
            relaxation: self.qubits,
            p1q: self.p1q,
            p2q: self.p2q,
            depolarize_identity: self.depolarize_identity,
            readout: ReadoutModel {
                default: Some(ReadoutError {
                    e0: self.readout.e0,
                    e1: self.readout.e1,
                }),
                per_qubit: self.readout.qubits,
            },
            drift: self.drift,
            durations: self.durations,
        }
    }

    fn from_model(m: &NoiseModel) -> Self {
        let def = m.readout.default.unwrap_or(ReadoutError::IDEAL);
        NoiseFile {
            name: m.name.clone(),
            t1_us: m.default_relaxation.map(|r| r.t1_us),
            t2_us: m.default_relaxation.map(|r| r.t2_us),
            p1q: m.p1q,
            p2q: m.p2q,
            depolarize_identity: m.depolarize_identity,
            readout: ReadoutFile {
                e0: def.e0,
                e1: def.e1,
                qubits: m.readout.per_qubit.clone(),
            },
            qubits: m.relaxation.clone(),
            drift: m.drift.clone(),
            durations: m.durations,
        }
    }
}
