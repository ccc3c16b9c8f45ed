//! OpenQASM 2.0 emission, plus a checker for the emitted subset.
//!
//! Qubits map to `q[i]` by their position in the circuit register. The
//! `j`-th measurement writes `c[j]`, so classical bit `j` is character `j`
//! of an outcome string. Measurements are always emitted last.

use std::fmt::Write as _;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

pub fn export_qasm(circuit: &Circuit) -> Result<String> {
    let n = circuit.num_qubits();
    let index = |label: &str| -> Result<usize> {
        circuit
            .qubits()
            .iter()
            .position(|q| q == label)
            .ok_or_else(|| Error::UnknownQubit(label.to_string()))
    };
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{n}];");
    let _ = writeln!(out, "creg c[{n}];");

    let (measures, body): (Vec<&Gate>, Vec<&Gate>) = circuit
        .gates()
        .iter()
        .partition(|g| g.kind == GateKind::Measure);
    for g in body {
        let args = g
            .targets
            .iter()
            .map(|t| index(t).map(|i| format!("q[{i}]")))
            .collect::<Result<Vec<_>>>()?
            .join(",");
        match g.kind {
            GateKind::Phase(phi) => {
                // avoid emitting "-0"
                let phi = if phi == 0.0 { 0.0 } else { phi };
                let _ = writeln!(out, "u1({phi}) {args};");
            }
            GateKind::Measure => unreachable!(),
            kind => {
                let _ = writeln!(out, "{} {args};", kind.name());
            }
        }
    }
    for (j, g) in measures.iter().enumerate() {
        let _ = writeln!(out, "measure q[{}] -> c[{j}];", index(&g.targets[0])?);
    }
    Ok(out)
}

/// One statement of the emitted subset.
#[derive(Debug, Clone, PartialEq)]
pub struct QasmGate {
    pub name: String,
    pub param: Option<f64>,
    pub qubits: Vec<usize>,
    pub clbit: Option<usize>,
}

fn parse_index(arg: &str, reg: &str, size: usize, line: usize) -> Result<usize> {
    let bad = || Error::InvalidCircuit(format!("line {line}: bad operand `{arg}`"));
    let inner = arg
        .trim()
        .strip_prefix(reg)
        .and_then(|s| s.strip_prefix('['))
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(bad)?;
    let i: usize = inner.parse().map_err(|_| bad())?;
    if i >= size {
        return Err(Error::InvalidCircuit(format!(
            "line {line}: index {i} out of range for {reg}[{size}]"
        )));
    }
    Ok(i)
}

/// Parses text in the subset `export_qasm` produces and returns the
/// register size with the statement list. Anything else is rejected.
pub fn check_qasm(text: &str) -> Result<(usize, Vec<QasmGate>)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut expect = |want: &str| -> Result<()> {
        match lines.next() {
            Some((_, l)) if l == want => Ok(()),
            Some((n, l)) => Err(Error::InvalidCircuit(format!(
                "line {n}: expected `{want}`, found `{l}`"
            ))),
            None => Err(Error::InvalidCircuit(format!("missing `{want}`"))),
        }
    };
    expect("OPENQASM 2.0;")?;
    expect("include \"qelib1.inc\";")?;
    let mut sizes = [0usize; 2];
    for (slot, reg) in sizes.iter_mut().zip(["qreg q", "creg c"]) {
        let (n, l) = lines
            .next()
            .ok_or_else(|| Error::InvalidCircuit(format!("missing {reg}")))?;
        *slot = l
            .strip_prefix(reg)
            .and_then(|s| s.strip_prefix('['))
            .and_then(|s| s.strip_suffix("];"))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidCircuit(format!("line {n}: bad declaration `{l}`")))?;
    }
    let [nq, nc] = sizes;

    let mut gates = Vec::new();
    let mut measuring = false;
    for (n, l) in lines {
        if l.is_empty() {
            continue;
        }
        let stmt = l
            .strip_suffix(';')
            .ok_or_else(|| Error::InvalidCircuit(format!("line {n}: missing `;`")))?;
        if let Some(rest) = stmt.strip_prefix("measure ") {
            let (q, cl) = rest
                .split_once("->")
                .ok_or_else(|| Error::InvalidCircuit(format!("line {n}: bad measure")))?;
            gates.push(QasmGate {
                name: "measure".into(),
                param: None,
                qubits: vec![parse_index(q, "q", nq, n)?],
                clbit: Some(parse_index(cl, "c", nc, n)?),
            });
            measuring = true;
            continue;
        }
        if measuring {
            return Err(Error::InvalidCircuit(format!(
                "line {n}: gate after measurements"
            )));
        }
        let (head, args) = stmt
            .split_once(' ')
            .ok_or_else(|| Error::InvalidCircuit(format!("line {n}: bad statement `{l}`")))?;
        let (name, param) = match head.split_once('(') {
            Some((name, p)) => {
                let p = p
                    .strip_suffix(')')
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidCircuit(format!("line {n}: bad parameter")))?;
                (name, Some(p))
            }
            None => (head, None),
        };
        let arity = match (name, param.is_some()) {
            ("id" | "x" | "y" | "z" | "h", false) | ("u1", true) => Some(1),
            ("cx", false) => Some(2),
            ("barrier", false) => None,
            _ => {
                return Err(Error::InvalidCircuit(format!(
                    "line {n}: unsupported gate `{head}`"
                )))
            }
        };
        let qubits = args
            .split(',')
            .map(|a| parse_index(a, "q", nq, n))
            .collect::<Result<Vec<_>>>()?;
        if arity.is_some_and(|k| k != qubits.len()) {
            return Err(Error::InvalidCircuit(format!(
                "line {n}: wrong operand count"
            )));
        }
        gates.push(QasmGate {
            name: name.to_string(),
            param,
            qubits,
            clbit: None,
        });
    }
    Ok((nq, gates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::GateDurations;
    use proptest::prelude::*;

    fn q(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn empty_one_qubit_circuit() {
        let c = Circuit::new(q(&["Q0"])).unwrap();
        assert_eq!(
            export_qasm(&c).unwrap(),
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\n"
        );
    }

    #[test]
    fn bell_prep_lines_in_order() {
        let d = GateDurations::default();
        let c = Circuit::with_gates(
            q(&["Q0", "Q1"]),
            [
                d.gate(GateKind::H, "Q0").unwrap(),
                Gate::cnot("Q0", "Q1", d.cnot_ns).unwrap(),
            ],
        )
        .unwrap();
        let text = export_qasm(&c).unwrap();
        assert!(text.ends_with("h q[0];\ncx q[0],q[1];\n"), "{text}");
    }

    #[test]
    fn measures_go_last_and_phase_is_u1() {
        let d = GateDurations::default();
        let c = Circuit::with_gates(
            q(&["a", "b"]),
            [
                Gate::measure("b").unwrap(),
                d.gate(GateKind::Phase(-0.0), "a").unwrap(),
                d.gate(GateKind::I, "a").unwrap(),
                Gate::new(GateKind::Barrier, q(&["a", "b"]), 0.0).unwrap(),
                Gate::measure("a").unwrap(),
            ],
        )
        .unwrap();
        let text = export_qasm(&c).unwrap();
        let body: Vec<&str> = text.lines().skip(4).collect();
        assert_eq!(
            body,
            [
                "u1(0) q[0];",
                "id q[0];",
                "barrier q[0],q[1];",
                "measure q[1] -> c[0];",
                "measure q[0] -> c[1];"
            ]
        );
    }

    #[test]
    fn checker_rejects_foreign_input() {
        assert!(check_qasm("OPENQASM 3.0;").is_err());
        let base = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\n";
        assert!(check_qasm(&format!("{base}rx(0.1) q[0];\n")).is_err());
        assert!(check_qasm(&format!("{base}x q[3];\n")).is_err());
        assert!(check_qasm(&format!("{base}measure q[0] -> c[0];\nx q[0];\n")).is_err());
        assert!(check_qasm(&format!("{base}cx q[0];\n")).is_err());
    }

    fn arb_gate(n: usize) -> impl Strategy<Value = (u8, usize, usize, f64)> {
        (0u8..8, 0..n, 0..n, -10.0f64..10.0)
    }

    proptest! {
        #[test]
        fn export_then_check_round_trips(ops in proptest::collection::vec(arb_gate(3), 0..24)) {
            let labels = q(&["Q0", "Q1", "Q2"]);
            let d = GateDurations::default();
            let mut c = Circuit::new(labels.clone()).unwrap();
            for (k, a, b, phi) in ops {
                let ta = labels[a].as_str();
                let tb = labels[b].as_str();
                let gate = match k {
                    0 => d.gate(GateKind::I, ta),
                    1 => d.gate(GateKind::X, ta),
                    2 => d.gate(GateKind::Y, ta),
                    3 => d.gate(GateKind::Z, ta),
                    4 => d.gate(GateKind::H, ta),
                    5 => d.gate(GateKind::Phase(phi), ta),
                    6 if a != b => Gate::cnot(ta, tb, d.cnot_ns),
                    _ => Gate::new(GateKind::Barrier, labels.clone(), 0.0),
                };
                c.push(gate.unwrap()).unwrap();
            }
            for l in ["Q2", "Q0"] {
                c.push(Gate::measure(l).unwrap()).unwrap();
            }
            let text = export_qasm(&c).unwrap();
            prop_assert_eq!(export_qasm(&c).unwrap(), text.clone());
            let (nq, parsed) = check_qasm(&text).unwrap();
            prop_assert_eq!(nq, 3);
            prop_assert_eq!(parsed.len(), c.gates().len());
            let idx = |t: &String| labels.iter().position(|l| l == t).unwrap();
            for (p, g) in parsed.iter().zip(c.gates()) {
                prop_assert_eq!(p.name.as_str(), g.kind.name());
                prop_assert_eq!(&p.qubits, &g.targets.iter().map(idx).collect::<Vec<_>>());
                if let GateKind::Phase(phi) = g.kind {
                    prop_assert_eq!(p.param, Some(phi));
                }
            }
        }
    }
}
