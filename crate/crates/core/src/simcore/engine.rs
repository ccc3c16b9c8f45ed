use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::ShotRng;
use super::state::{bitstring, MixedState, PureState};
use crate::circuits::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::metrics::{CountsTable, Distribution};
use crate::noise::{NoiseModel, NoiseOp, ReadoutModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOptions {
    pub density_cap: usize,
    pub trajectory_cap: usize,
    /// Allocate qubits on first use and trace them out after their last
    /// gate. Measured qubits are kept to the end.
    pub retire_idle: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            density_cap: 12,
            trajectory_cap: 20,
            retire_idle: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Density,
    Trajectory,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Density => "density",
            Backend::Trajectory => "trajectory",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "density" => Ok(Backend::Density),
            "trajectory" => Ok(Backend::Trajectory),
            other => Err(Error::InvalidParameter(format!(
                "unknown backend `{other}`"
            ))),
        }
    }
}

enum Step {
    Unitary {
        matrix: CMatrix,
        conj: CMatrix,
        rows: Vec<usize>,
    },
    Channel {
        ops: Vec<CMatrix>,
        // K^dagger K, for branch probabilities
        grams: Vec<CMatrix>,
        superop: CMatrix,
        rows: Vec<usize>,
    },
    Allocate(String),
    Retire {
        label: String,
        pos: usize,
    },
}

/// A circuit lowered to position-resolved steps, shared by both backends.
struct Program {
    initial: Vec<String>,
    steps: Vec<Step>,
    measured: Vec<String>,
    measured_pos: Vec<usize>,
    peak: usize,
}

struct Layout {
    order: Vec<String>,
    peak: usize,
}

impl Layout {
    fn pos(&self, label: &str) -> usize {
        self.order
            .iter()
            .position(|q| q == label)
            .expect("live qubit")
    }

    fn rows(&self, targets: &[String]) -> Vec<usize> {
        targets.iter().map(|t| self.pos(t)).collect()
    }
}

fn compile(circuit: &Circuit, noise: &NoiseModel, opts: &SimOptions) -> Result<Program> {
    noise.validate()?;
    let measured = circuit.measured();
    let gates = circuit.gates();

    let mut last_use: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, g) in gates.iter().enumerate() {
        if g.kind.is_unitary() {
            for t in &g.targets {
                last_use.insert(t, i);
            }
        }
    }

    let initial: Vec<String> = if opts.retire_idle {
        Vec::new()
    } else {
        circuit.qubits().to_vec()
    };
    let mut layout = Layout {
        peak: initial.len(),
        order: initial.clone(),
    };
    let mut steps = Vec::new();

    for (i, gate) in gates.iter().enumerate() {
        if !gate.kind.is_unitary() {
            continue;
        }
        for t in &gate.targets {
            if !layout.order.contains(t) {
                layout.order.push(t.clone());
                layout.peak = layout.peak.max(layout.order.len());
                steps.push(Step::Allocate(t.clone()));
            }
        }
        if gate.kind != GateKind::I {
            let matrix = gate.matrix()?;
            steps.push(Step::Unitary {
                conj: matrix.map(|z| z.conj()),
                matrix,
                rows: layout.rows(&gate.targets),
            });
        }
        for op in noise.ops_for(gate)? {
            match op {
                NoiseOp::Channel(ch, targets) => {
                    let ops = ch.operators().to_vec();
                    steps.push(Step::Channel {
                        grams: ops.iter().map(|k| k.adjoint() * k).collect(),
                        superop: ch.superoperator(),
                        ops,
                        rows: layout.rows(&targets),
                    });
                }
                NoiseOp::Unitary(matrix, target) => {
                    if !layout.order.contains(&target) {
                        continue;
                    }
                    steps.push(Step::Unitary {
                        conj: matrix.map(|z| z.conj()),
                        matrix,
                        rows: vec![layout.pos(&target)],
                    });
                }
            }
        }
        if opts.retire_idle {
            for t in &gate.targets {
                if last_use.get(t.as_str()) == Some(&i) && !measured.contains(t) {
                    let pos = layout.pos(t);
                    layout.order.remove(pos);
                    steps.push(Step::Retire {
                        label: t.clone(),
                        pos,
                    });
                }
            }
        }
    }
    for m in &measured {
        if !layout.order.contains(m) {
            layout.order.push(m.clone());
            layout.peak = layout.peak.max(layout.order.len());
            steps.push(Step::Allocate(m.clone()));
        }
    }
    for m in &measured {
        noise.readout.for_qubit(m)?;
    }
    let measured_pos = layout.rows(&measured);
    Ok(Program {
        initial,
        steps,
        measured,
        measured_pos,
        peak: layout.peak,
    })
}

fn run_density(program: &Program) -> Result<MixedState> {
    let mut rho = MixedState::zero(program.initial.clone())?;
    for step in &program.steps {
        match step {
            Step::Unitary { matrix, conj, rows } => rho.apply_unitary_at(matrix, conj, rows),
            Step::Channel { superop, rows, .. } => rho.apply_superoperator(superop, rows),
            Step::Allocate(label) => rho.push_zero_qubit(label.clone()),
            Step::Retire { label, .. } => rho.remove_qubit(label)?,
        }
    }
    Ok(rho)
}

/// Evolves `|0...0>` through the circuit: each gate's ideal unitary, then
/// its depolarizing, damping and drift noise. Measurements are left to
/// [`measurement_distribution`].
pub fn evolve_density(circuit: &Circuit, noise: &NoiseModel) -> Result<MixedState> {
    evolve_density_with(circuit, noise, &SimOptions::default())
}

pub fn evolve_density_with(
    circuit: &Circuit,
    noise: &NoiseModel,
    opts: &SimOptions,
) -> Result<MixedState> {
    let program = compile(circuit, noise, opts)?;
    if program.peak > opts.density_cap {
        return Err(Error::DensityCapExceeded {
            qubits: program.peak,
            cap: opts.density_cap,
        });
    }
    run_density(&program)
}

/// Computational-basis populations of `state`, in its qubit order, pushed
/// through each qubit's readout confusion.
pub fn measurement_distribution(
    state: &MixedState,
    readout: &ReadoutModel,
) -> Result<Distribution> {
    let n = state.num_qubits();
    let mut probs = state.diagonal();
    for (pos, q) in state.qubit_order().iter().enumerate() {
        let err = readout.for_qubit(q)?;
        let shift = n - 1 - pos;
        let mut next = vec![0.0; probs.len()];
        for (i, p) in probs.iter().enumerate() {
            let actual = i >> shift & 1 == 1;
            let flipped = i ^ (1 << shift);
            next[i] += p * err.prob(actual, actual);
            next[flipped] += p * err.prob(actual, !actual);
        }
        probs = next;
    }
    // clamp round-off so the distribution validates
    let sum: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    Distribution::new(
        probs
            .into_iter()
            .enumerate()
            .map(|(i, p)| (bitstring(i, n), p.max(0.0) / sum))
            .collect(),
    )
}

/// The classical outcome of one shot, in measurement order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotOutcome {
    pub bits: Vec<(String, u8)>,
}

impl ShotOutcome {
    pub fn bitstring(&self) -> String {
        self.bits
            .iter()
            .map(|(_, b)| if *b == 1 { '1' } else { '0' })
            .collect()
    }
}

fn run_shot(program: &Program, readout: &[(f64, f64)], rng: &mut ShotRng) -> usize {
    let mut psi = PureState::zero(program.initial.clone()).expect("distinct labels");
    for step in &program.steps {
        match step {
            Step::Unitary { matrix, rows, .. } => psi.apply_operator(matrix, rows),
            Step::Channel {
                ops, grams, rows, ..
            } => {
                if ops.len() == 1 {
                    psi.apply_operator(&ops[0], rows);
                    continue;
                }
                let local = psi.local_density(rows);
                let weights: Vec<f64> = grams
                    .iter()
                    .map(|g| (g * &local).trace().re.max(0.0))
                    .collect();
                let r = rng.uniform() * weights.iter().sum::<f64>();
                let mut acc = 0.0;
                let mut pick = weights.iter().rposition(|w| *w > 0.0).unwrap_or(0);
                for (k, w) in weights.iter().enumerate() {
                    acc += w;
                    if r < acc {
                        pick = k;
                        break;
                    }
                }
                psi.apply_operator(&ops[pick], rows);
                psi.scale(1.0 / weights[pick].sqrt());
            }
            Step::Allocate(label) => psi.push_zero_qubit(label.clone()),
            Step::Retire { pos, .. } => {
                let bit = rng.uniform() < psi.prob_one(*pos);
                psi.collapse_and_remove(*pos, bit);
            }
        }
    }

    let r = rng.uniform() * psi.norm_sqr();
    let amps = psi.amplitudes();
    let mut acc = 0.0;
    let mut index = amps.iter().rposition(|a| a.norm_sqr() > 0.0).unwrap_or(0);
    for (i, a) in amps.iter().enumerate() {
        acc += a.norm_sqr();
        if r < acc {
            index = i;
            break;
        }
    }

    let n = psi.num_qubits();
    let m = program.measured_pos.len();
    let mut outcome = 0usize;
    for (j, (&pos, &(e0, e1))) in program.measured_pos.iter().zip(readout).enumerate() {
        let actual = index >> (n - 1 - pos) & 1 == 1;
        let flip = rng.uniform() < if actual { e1 } else { e0 };
        if actual != flip {
            outcome |= 1 << (m - 1 - j);
        }
    }
    outcome
}

fn prepare_trajectories(
    circuit: &Circuit,
    noise: &NoiseModel,
    opts: &SimOptions,
) -> Result<(Program, Vec<(f64, f64)>)> {
    let program = compile(circuit, noise, opts)?;
    if program.peak > opts.trajectory_cap {
        return Err(Error::TrajectoryCapExceeded {
            qubits: program.peak,
            cap: opts.trajectory_cap,
        });
    }
    let readout = program
        .measured
        .iter()
        .map(|q| noise.readout.for_qubit(q).map(|e| (e.e0, e.e1)))
        .collect::<Result<Vec<_>>>()?;
    Ok((program, readout))
}

/// Samples `shots` independent trajectories. Shot `k` uses its own random
/// stream, so the table depends only on (seed, circuit, noise).
pub fn run_trajectories(
    circuit: &Circuit,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<CountsTable> {
    run_trajectories_with(circuit, noise, shots, seed, &SimOptions::default())
}

pub fn run_trajectories_with(
    circuit: &Circuit,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
    opts: &SimOptions,
) -> Result<CountsTable> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let (program, readout) = prepare_trajectories(circuit, noise, opts)?;
    let m = program.measured.len();
    let tally = (0..shots)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<usize, u64>, shot| {
            let mut rng = ShotRng::for_shot(seed, shot);
            *acc.entry(run_shot(&program, &readout, &mut rng))
                .or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(CountsTable::new(
        tally
            .into_iter()
            .map(|(k, v)| (bitstring(k, m), v))
            .collect(),
    ))
}

/// Runs the single shot `shot` of a trajectory run seeded with `seed`.
pub fn sample_shot(
    circuit: &Circuit,
    noise: &NoiseModel,
    seed: u64,
    shot: u64,
) -> Result<ShotOutcome> {
    let (program, readout) = prepare_trajectories(circuit, noise, &SimOptions::default())?;
    let mut rng = ShotRng::for_shot(seed, shot);
    let index = run_shot(&program, &readout, &mut rng);
    let m = program.measured.len();
    Ok(ShotOutcome {
        bits: program
            .measured
            .iter()
            .enumerate()
            .map(|(j, q)| (q.clone(), (index >> (m - 1 - j) & 1) as u8))
            .collect(),
    })
}

/// Noise-free state vector of the unitary part of the circuit.
pub fn simulate_ideal(circuit: &Circuit) -> Result<PureState> {
    let mut psi = PureState::zero(circuit.qubits().to_vec())?;
    for g in circuit.gates().iter().filter(|g| g.kind.is_unitary()) {
        psi.apply_unitary(&g.matrix()?, &g.targets)?;
    }
    Ok(psi)
}

/// Result of running one circuit on either backend.
#[derive(Debug, Clone, PartialEq)]
pub struct CellOutcome {
    /// Outcome distribution over the measured qubits in measurement order.
    /// Exact for the density backend, empirical for trajectories.
    pub distribution: Distribution,
    /// Raw counts (trajectory backend only).
    pub counts: Option<CountsTable>,
    pub shots: u64,
}

pub fn simulate(
    circuit: &Circuit,
    noise: &NoiseModel,
    backend: Backend,
    shots: u64,
    seed: u64,
    opts: &SimOptions,
) -> Result<CellOutcome> {
    match backend {
        Backend::Density => {
            let rho = evolve_density_with(circuit, noise, opts)?;
            let measured = circuit.measured();
            let distribution = if measured.is_empty() {
                Distribution::point("")
            } else {
                measurement_distribution(&rho.partial_trace(&measured)?, &noise.readout)?
            };
            Ok(CellOutcome {
                distribution,
                counts: None,
                shots,
            })
        }
        Backend::Trajectory => {
            let counts = run_trajectories_with(circuit, noise, shots, seed, opts)?;
            Ok(CellOutcome {
                distribution: Distribution::from_counts(&counts)?,
                counts: Some(counts),
                shots,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{Gate, GateDurations};
    use crate::linalg::{c, max_abs_diff, ZERO};
    use crate::noise::ReadoutError;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("Q{i}")).collect()
    }

    fn bell_circuit(measure: bool) -> Circuit {
        let d = GateDurations::default();
        let mut circ = Circuit::with_gates(
            labels(2),
            [
                d.gate(GateKind::H, "Q0").unwrap(),
                Gate::cnot("Q0", "Q1", d.cnot_ns).unwrap(),
            ],
        )
        .unwrap();
        if measure {
            circ.extend([Gate::measure("Q0").unwrap(), Gate::measure("Q1").unwrap()])
                .unwrap();
        }
        circ
    }

    #[test]
    fn empty_circuit_stays_in_ground_state() {
        let rho = evolve_density(
            &Circuit::new(labels(3)).unwrap(),
            &NoiseModel::ibmqx5_2018(),
        )
        .unwrap();
        assert_eq!(rho.entry(0, 0), c(1.0, 0.0));
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
        assert_eq!(rho.diagonal().iter().filter(|p| **p != 0.0).count(), 1);
    }

    #[test]
    fn bell_prep_fidelity_under_cnot_depolarizing() {
        let p = 0.03;
        let noise = NoiseModel {
            p2q: p,
            ..NoiseModel::noiseless()
        };
        let rho = evolve_density(&bell_circuit(false), &noise).unwrap();
        let s = c(FRAC_1_SQRT_2, 0.0);
        let phi = PureState::from_amplitudes(labels(2), vec![s, ZERO, ZERO, s]).unwrap();
        // brute-force value for the 15-Pauli sum: 1 - p + p/15 * 3
        assert!((rho.fidelity_with(&phi).unwrap() - (1.0 - p + p * 3.0 / 15.0)).abs() < 1e-12);
    }

    #[test]
    fn readout_confusion_rows() {
        let one = PureState::from_amplitudes(labels(1), vec![ZERO, c(1.0, 0.0)])
            .unwrap()
            .to_mixed();
        let readout = ReadoutModel::uniform(ReadoutError { e0: 0.03, e1: 0.06 });
        let d = measurement_distribution(&one, &readout).unwrap();
        assert!((d.get("1") - 0.94).abs() < 1e-12);
        assert!((d.get("0") - 0.06).abs() < 1e-12);

        let ket01 = PureState::from_amplitudes(labels(2), vec![ZERO, c(1.0, 0.0), ZERO, ZERO])
            .unwrap()
            .to_mixed();
        let d = measurement_distribution(&ket01, &ReadoutModel::ideal()).unwrap();
        assert_eq!(d.get("01"), 1.0);

        let half = c(0.5, 0.0);
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![half, ZERO, half, ZERO]));
        let mixed = MixedState::from_matrix(labels(2), &m).unwrap();
        let d = measurement_distribution(&mixed, &ReadoutModel::ideal()).unwrap();
        let probs: Vec<f64> = ["00", "01", "10", "11"].iter().map(|k| d.get(k)).collect();
        assert_eq!(probs, [0.5, 0.0, 0.5, 0.0]);

        assert!(matches!(
            measurement_distribution(&mixed, &ReadoutModel::default()),
            Err(Error::MissingReadout(_))
        ));
    }

    #[test]
    fn trajectories_are_deterministic() {
        let noise = NoiseModel::ibmqx5_2018();
        let a = run_trajectories(&bell_circuit(true), &noise, 2000, 99).unwrap();
        let b = run_trajectories(&bell_circuit(true), &noise, 2000, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.shots(), 2000);
        let c = run_trajectories(&bell_circuit(true), &noise, 2000, 100).unwrap();
        assert_ne!(a, c);
        assert!(run_trajectories(&bell_circuit(true), &noise, 0, 1).is_err());
    }

    #[test]
    fn shots_match_the_bulk_run() {
        let noise = NoiseModel::ibmqx5_2018();
        let circ = bell_circuit(true);
        let table = run_trajectories(&circ, &noise, 64, 5).unwrap();
        let mut tally: BTreeMap<String, u64> = BTreeMap::new();
        for k in 0..64 {
            *tally
                .entry(sample_shot(&circ, &noise, 5, k).unwrap().bitstring())
                .or_insert(0) += 1;
        }
        assert_eq!(&tally, table.counts());
    }

    #[test]
    fn ideal_bell_counts() {
        let counts =
            run_trajectories(&bell_circuit(true), &NoiseModel::noiseless(), 8192, 3).unwrap();
        assert_eq!(counts.get("01") + counts.get("10"), 0);
        let n0 = counts.get("00") as f64;
        // binomial(8192, 1/2) within 4 sigma
        assert!((n0 - 4096.0).abs() < 4.0 * (8192.0f64 * 0.25).sqrt());
    }

    #[test]
    fn density_cap_is_enforced() {
        let circ = Circuit::new(labels(13)).unwrap();
        assert!(matches!(
            evolve_density(&circ, &NoiseModel::noiseless()),
            Err(Error::DensityCapExceeded {
                qubits: 13,
                cap: 12
            })
        ));
        let circ = Circuit::new(labels(21)).unwrap();
        assert!(matches!(
            run_trajectories(&circ, &NoiseModel::noiseless(), 1, 0),
            Err(Error::TrajectoryCapExceeded { .. })
        ));
    }

    #[test]
    fn retirement_matches_full_register() {
        // payload walks down a 5-qubit line and back
        let d = GateDurations::default();
        let mut circ = Circuit::new(labels(5)).unwrap();
        circ.push(d.gate(GateKind::H, "Q0").unwrap()).unwrap();
        circ.push(Gate::cnot("Q0", "Q1", d.cnot_ns).unwrap())
            .unwrap();
        for (a, b) in [(1, 2), (2, 3), (3, 4)] {
            for g in crate::circuits::decompose_swap(
                &format!("Q{a}"),
                &format!("Q{b}"),
                crate::circuits::CnotDirection::Both,
                &d,
            )
            .unwrap()
            {
                circ.push(g).unwrap();
            }
        }
        circ.push(Gate::cnot("Q0", "Q4", d.cnot_ns).unwrap())
            .unwrap();
        circ.extend([Gate::measure("Q0").unwrap(), Gate::measure("Q4").unwrap()])
            .unwrap();
        let noise = NoiseModel::ibmqx5_2018();
        let full = simulate(
            &circ,
            &noise,
            Backend::Density,
            1,
            0,
            &SimOptions::default(),
        )
        .unwrap();
        let lazy = SimOptions {
            retire_idle: true,
            density_cap: 3,
            ..SimOptions::default()
        };
        let retired = simulate(&circ, &noise, Backend::Density, 1, 0, &lazy).unwrap();
        assert!(full.distribution.total_variation(&retired.distribution) < 1e-12);
    }

    #[test]
    fn unitary_circuits_stay_pure() {
        let circ = bell_circuit(false);
        let rho = evolve_density(&circ, &NoiseModel::noiseless()).unwrap();
        let psi = simulate_ideal(&circ).unwrap();
        assert!(max_abs_diff(&rho.matrix(), &psi.to_mixed().matrix()) < 1e-12);
    }

    #[test]
    fn backend_names_round_trip() {
        for b in [Backend::Density, Backend::Trajectory] {
            assert_eq!(b.to_string().parse::<Backend>().unwrap(), b);
        }
        assert!("gpu".parse::<Backend>().is_err());
    }
}
