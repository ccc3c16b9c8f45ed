//! Circuit representation, the standard gate set, and circuit builders.

mod qasm;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, identity, pauli_x, pauli_y, pauli_z, CMatrix, ONE, ZERO};

pub use qasm::{check_qasm, export_qasm, QasmGate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    /// `diag(1, e^{i phi})`.
    Phase(f64),
    Cnot,
    Measure,
    Barrier,
}

impl GateKind {
    pub fn is_unitary(&self) -> bool {
        !matches!(self, GateKind::Measure | GateKind::Barrier)
    }

    pub fn arity(&self) -> Option<usize> {
        match self {
            GateKind::Cnot => Some(2),
            GateKind::Barrier => None,
            _ => Some(1),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::I => "id",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::Phase(_) => "u1",
            GateKind::Cnot => "cx",
            GateKind::Measure => "measure",
            GateKind::Barrier => "barrier",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Phase(phi) => write!(f, "u1({phi})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Exact matrix of a unitary gate kind.
pub fn gate_matrix(kind: GateKind) -> Result<CMatrix> {
    let m = match kind {
        GateKind::I => identity(2),
        GateKind::X => pauli_x(),
        GateKind::Y => pauli_y(),
        GateKind::Z => pauli_z(),
        GateKind::H => {
            let s = c(FRAC_1_SQRT_2, 0.0);
            CMatrix::from_row_slice(2, 2, &[s, s, s, -s])
        }
        GateKind::Phase(phi) => {
            CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, phase_factor(phi)])
        }
        GateKind::Cnot => CMatrix::from_row_slice(
            4,
            4,
            &[
                ONE, ZERO, ZERO, ZERO, //
                ZERO, ONE, ZERO, ZERO, //
                ZERO, ZERO, ZERO, ONE, //
                ZERO, ZERO, ONE, ZERO,
            ],
        ),
        GateKind::Measure | GateKind::Barrier => {
            return Err(Error::NotUnitaryGate(kind.name().to_string()))
        }
    };
    Ok(m)
}

/// `e^{i phi}`, exact at multiples of `pi/2`.
fn phase_factor(phi: f64) -> Complex64 {
    let quarter = phi / std::f64::consts::FRAC_PI_2;
    if quarter.fract() == 0.0 && quarter.abs() < 1e15 {
        match (quarter as i64).rem_euclid(4) {
            0 => ONE,
            1 => c(0.0, 1.0),
            2 => -ONE,
            _ => c(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, phi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    /// Control first for CNOT.
    pub targets: Vec<String>,
    pub duration_ns: f64,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<String>, duration_ns: f64) -> Result<Self> {
        if let Some(arity) = kind.arity() {
            if targets.len() != arity {
                return Err(Error::InvalidGate(format!(
                    "{} takes {arity} target(s), got {}",
                    kind.name(),
                    targets.len()
                )));
            }
        }
        if kind == GateKind::Cnot && targets[0] == targets[1] {
            return Err(Error::InvalidGate(format!(
                "cx control and target are both `{}`",
                targets[0]
            )));
        }
        if let GateKind::Phase(phi) = kind {
            if !phi.is_finite() {
                return Err(Error::InvalidGate(format!("u1 angle {phi} is not finite")));
            }
        }
        if !(duration_ns >= 0.0 && duration_ns.is_finite()) {
            return Err(Error::InvalidGate(format!("duration {duration_ns} ns")));
        }
        Ok(Self {
            kind,
            targets,
            duration_ns,
        })
    }

    pub fn single(kind: GateKind, target: &str, duration_ns: f64) -> Result<Self> {
        Self::new(kind, vec![target.to_string()], duration_ns)
    }

    pub fn cnot(control: &str, target: &str, duration_ns: f64) -> Result<Self> {
        Self::new(
            GateKind::Cnot,
            vec![control.to_string(), target.to_string()],
            duration_ns,
        )
    }

    pub fn measure(target: &str) -> Result<Self> {
        Self::single(GateKind::Measure, target, 0.0)
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        gate_matrix(self.kind)
    }
}

/// Default gate durations. Gates carry their own duration; these are the
/// values builders stamp on new gates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GateDurations {
    pub identity_ns: f64,
    pub single_ns: f64,
    pub cnot_ns: f64,
    pub measure_ns: f64,
}

impl Default for GateDurations {
    fn default() -> Self {
        Self {
            identity_ns: 90.0,
            single_ns: 90.0,
            cnot_ns: 300.0,
            measure_ns: 0.0,
        }
    }
}

impl GateDurations {
    pub fn for_kind(&self, kind: GateKind) -> f64 {
        match kind {
            GateKind::I => self.identity_ns,
            GateKind::Cnot => self.cnot_ns,
            GateKind::Measure => self.measure_ns,
            GateKind::Barrier => 0.0,
            _ => self.single_ns,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("identity_ns", self.identity_ns),
            ("single_ns", self.single_ns),
            ("cnot_ns", self.cnot_ns),
            ("measure_ns", self.measure_ns),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {v}")));
            }
        }
        Ok(())
    }

    /// Convenience: a gate of `kind` on one qubit with the default duration.
    pub fn gate(&self, kind: GateKind, target: &str) -> Result<Gate> {
        Gate::single(kind, target, self.for_kind(kind))
    }
}

/// Which CNOT orientations a coupling allows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CnotDirection {
    AToB,
    BToA,
    Both,
}

/// A CNOT from `control` to `target`, H-wrapped when only the opposite
/// orientation is available.
pub fn oriented_cnot(
    control: &str,
    target: &str,
    native_forward: bool,
    durations: &GateDurations,
) -> Result<Vec<Gate>> {
    if native_forward {
        return Ok(vec![Gate::cnot(control, target, durations.cnot_ns)?]);
    }
    let h = |q: &str| durations.gate(GateKind::H, q);
    Ok(vec![
        h(control)?,
        h(target)?,
        Gate::cnot(target, control, durations.cnot_ns)?,
        h(control)?,
        h(target)?,
    ])
}

/// SWAP of `a` and `b` as three CNOTs, honoring the allowed direction.
pub fn decompose_swap(
    a: &str,
    b: &str,
    allowed: CnotDirection,
    durations: &GateDurations,
) -> Result<Vec<Gate>> {
    if a == b {
        return Err(Error::InvalidGate(format!("swap of `{a}` with itself")));
    }
    // outer CNOTs run along an allowed direction; the middle one is reversed
    let (outer_c, outer_t) = match allowed {
        CnotDirection::AToB | CnotDirection::Both => (a, b),
        CnotDirection::BToA => (b, a),
    };
    let middle_native = allowed == CnotDirection::Both;
    let mut gates = oriented_cnot(outer_c, outer_t, true, durations)?;
    gates.extend(oriented_cnot(outer_t, outer_c, middle_native, durations)?);
    gates.extend(oriented_cnot(outer_c, outer_t, true, durations)?);
    Ok(gates)
}

/// `n` identity gates of `tau_ns` each on `target`.
pub fn identity_train(target: &str, n: usize, tau_ns: f64) -> Result<Vec<Gate>> {
    (0..n)
        .map(|_| Gate::single(GateKind::I, target, tau_ns))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    qubits: Vec<String>,
    gates: Vec<Gate>,
    pub metadata: BTreeMap<String, String>,
}

impl Circuit {
    pub fn new(qubits: Vec<String>) -> Result<Self> {
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::DuplicateQubit(q.clone()));
            }
        }
        Ok(Self {
            qubits,
            gates: Vec::new(),
            metadata: BTreeMap::new(),
        })
    }

    pub fn with_gates(qubits: Vec<String>, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut circuit = Self::new(qubits)?;
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        for t in &gate.targets {
            if !self.qubits.contains(t) {
                return Err(Error::UnknownQubit(t.clone()));
            }
            if gate.kind != GateKind::Barrier && self.is_measured(t) {
                return Err(Error::InvalidCircuit(format!(
                    "gate {} on `{t}` after its measurement",
                    gate.kind
                )));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    fn is_measured(&self, q: &str) -> bool {
        self.gates
            .iter()
            .any(|g| g.kind == GateKind::Measure && g.targets[0] == q)
    }

    pub fn qubits(&self) -> &[String] {
        &self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    /// Measured qubits in measurement order; this is the bit order of
    /// every outcome string.
    pub fn measured(&self) -> Vec<String> {
        self.gates
            .iter()
            .filter(|g| g.kind == GateKind::Measure)
            .map(|g| g.targets[0].clone())
            .collect()
    }

    pub fn total_duration_ns(&self) -> f64 {
        self.gates.iter().map(|g| g.duration_ns).sum()
    }

    pub fn count(&self, pred: impl Fn(&GateKind) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(&g.kind)).count()
    }

    /// Product of all unitary gates (measure/barrier skipped) as a matrix
    /// over the register.
    pub fn unitary(&self) -> Result<CMatrix> {
        let n = self.num_qubits();
        let dim = 1usize << n;
        let mut columns = Vec::with_capacity(dim);
        for col in 0..dim {
            let mut amps = vec![ZERO; dim];
            amps[col] = ONE;
            let mut psi = crate::simcore::PureState::from_amplitudes(self.qubits.clone(), amps)?;
            for g in self.gates.iter().filter(|g| g.kind.is_unitary()) {
                psi.apply_unitary(&g.matrix()?, &g.targets)?;
            }
            columns.push(psi.amplitudes().to_vec());
        }
        Ok(CMatrix::from_fn(dim, dim, |r, col| columns[col][r]))
    }
}
