//! Pure and mixed register states with labelled qubits.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{apply_local, local_offsets, unitarity_deviation, CMatrix, ONE, ZERO};
use crate::simcore::kraus::KrausChannel;

/// Tolerance on state invariants (norm, trace, hermiticity, positivity).
pub const STATE_TOL: f64 = 1e-8;
/// Tolerance on gate unitarity.
pub const UNITARY_TOL: f64 = 1e-9;

fn check_labels(labels: &[String]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateQubit(l.clone()));
        }
    }
    Ok(())
}

fn resolve(order: &[String], targets: &[String]) -> Result<Vec<usize>> {
    let mut positions = Vec::with_capacity(targets.len());
    for t in targets {
        let pos = order
            .iter()
            .position(|q| q == t)
            .ok_or_else(|| Error::UnknownQubit(t.clone()))?;
        if positions.contains(&pos) {
            return Err(Error::DuplicateQubit(t.clone()));
        }
        positions.push(pos);
    }
    Ok(positions)
}

fn check_unitary(matrix: &CMatrix, arity: usize) -> Result<()> {
    let dim = 1usize << arity;
    if matrix.nrows() != dim || matrix.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: matrix.nrows().max(matrix.ncols()),
        });
    }
    let deviation = unitarity_deviation(matrix);
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Renders basis index `i` of an `n`-qubit register as a bitstring in
/// register order.
pub fn bitstring(i: usize, n: usize) -> String {
    (0..n)
        .map(|pos| {
            if i >> (n - 1 - pos) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    qubit_order: Vec<String>,
}

impl PureState {
    /// `|0...0>` over the given labels.
    pub fn zero(qubit_order: Vec<String>) -> Result<Self> {
        check_labels(&qubit_order)?;
        let mut amplitudes = vec![ZERO; 1 << qubit_order.len()];
        amplitudes[0] = ONE;
        Ok(Self {
            amplitudes,
            qubit_order,
        })
    }

    pub fn from_amplitudes(qubit_order: Vec<String>, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_labels(&qubit_order)?;
        let expected = 1usize << qubit_order.len();
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: amplitudes.len(),
            });
        }
        let state = Self {
            amplitudes,
            qubit_order,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidParameter(format!(
                "state norm^2 = {norm}, expected 1"
            )));
        }
        Ok(state)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn qubit_order(&self) -> &[String] {
        &self.qubit_order
    }

    pub fn num_qubits(&self) -> usize {
        self.qubit_order.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_unitary(&mut self, matrix: &CMatrix, targets: &[String]) -> Result<()> {
        check_unitary(matrix, targets.len())?;
        let positions = resolve(&self.qubit_order, targets)?;
        let n = self.num_qubits();
        apply_local(&mut self.amplitudes, n, &positions, matrix);
        Ok(())
    }

    /// Applies an arbitrary local operator without renormalizing.
    pub(crate) fn apply_operator(&mut self, matrix: &CMatrix, positions: &[usize]) {
        let n = self.num_qubits();
        apply_local(&mut self.amplitudes, n, positions, matrix);
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        for a in &mut self.amplitudes {
            *a *= factor;
        }
    }

    /// Appends a fresh qubit in `|0>` as the least significant position.
    pub(crate) fn push_zero_qubit(&mut self, label: String) {
        let mut grown = vec![ZERO; self.amplitudes.len() * 2];
        for (i, a) in self.amplitudes.iter().enumerate() {
            grown[i << 1] = *a;
        }
        self.amplitudes = grown;
        self.qubit_order.push(label);
    }

    /// Projects qubit `pos` onto `bit`, renormalizes and removes it.
    pub(crate) fn collapse_and_remove(&mut self, pos: usize, bit: bool) {
        let n = self.num_qubits();
        let shift = n - 1 - pos;
        let low_mask = (1usize << shift) - 1;
        let mut reduced = Vec::with_capacity(self.amplitudes.len() / 2);
        for r in 0..self.amplitudes.len() / 2 {
            let full = ((r & !low_mask) << 1) | (usize::from(bit) << shift) | (r & low_mask);
            reduced.push(self.amplitudes[full]);
        }
        let norm: f64 = reduced.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for a in &mut reduced {
                *a /= norm;
            }
        }
        self.amplitudes = reduced;
        self.qubit_order.remove(pos);
    }

    /// Probability that qubit `pos` reads 1.
    pub(crate) fn prob_one(&self, pos: usize) -> f64 {
        let shift = self.num_qubits() - 1 - pos;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i >> shift & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Reduced density matrix of the qubits at `positions`, first position
    /// as the most significant local bit.
    pub(crate) fn local_density(&self, positions: &[usize]) -> CMatrix {
        let n = self.num_qubits();
        let offsets = local_offsets(n, positions);
        let mask = offsets[offsets.len() - 1];
        let d = offsets.len();
        let mut out = CMatrix::zeros(d, d);
        for base in (0..self.amplitudes.len()).filter(|b| b & mask == 0) {
            for (r, ro) in offsets.iter().enumerate() {
                let a = self.amplitudes[base | ro];
                if a == ZERO {
                    continue;
                }
                for (col, co) in offsets.iter().enumerate() {
                    out[(r, col)] += a * self.amplitudes[base | co].conj();
                }
            }
        }
        out
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|^2`; both states must share a qubit order.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        if self.qubit_order != other.qubit_order {
            return Err(Error::InvalidParameter(
                "fidelity between states over different registers".into(),
            ));
        }
        Ok(self.inner(other).norm_sqr())
    }

    pub fn to_mixed(&self) -> MixedState {
        let dim = self.amplitudes.len();
        let mut rho = vec![ZERO; dim * dim];
        for (r, a) in self.amplitudes.iter().enumerate() {
            for (col, b) in self.amplitudes.iter().enumerate() {
                rho[r * dim + col] = a * b.conj();
            }
        }
        MixedState {
            rho,
            qubit_order: self.qubit_order.clone(),
        }
    }
}

/// Dense density matrix, stored row-major. Read as a vector of `2n` qubits
/// (row bits first, then column bits) so local operators can act on either
/// side with the same kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    rho: Vec<Complex64>,
    qubit_order: Vec<String>,
}

impl MixedState {
    pub fn zero(qubit_order: Vec<String>) -> Result<Self> {
        Ok(PureState::zero(qubit_order)?.to_mixed())
    }

    pub fn from_matrix(qubit_order: Vec<String>, matrix: &CMatrix) -> Result<Self> {
        check_labels(&qubit_order)?;
        let dim = 1usize << qubit_order.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.nrows(),
            });
        }
        let rho = (0..dim)
            .flat_map(|r| (0..dim).map(move |c| (r, c)))
            .map(|(r, c)| matrix[(r, c)])
            .collect();
        let state = Self { rho, qubit_order };
        state.check_invariants(STATE_TOL)?;
        Ok(state)
    }

    pub fn qubit_order(&self) -> &[String] {
        &self.qubit_order
    }

    pub fn num_qubits(&self) -> usize {
        self.qubit_order.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.rho[row * self.dim() + col]
    }

    pub fn matrix(&self) -> CMatrix {
        let dim = self.dim();
        CMatrix::from_row_slice(dim, dim, &self.rho)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// Computational-basis populations in register order.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entry(i, i).re).collect()
    }

    /// `<psi| rho |psi>` for a pure state over the same register.
    pub fn fidelity_with(&self, psi: &PureState) -> Result<f64> {
        if psi.qubit_order() != self.qubit_order {
            return Err(Error::InvalidParameter(
                "fidelity between states over different registers".into(),
            ));
        }
        let amps = psi.amplitudes();
        let dim = self.dim();
        let mut acc = ZERO;
        for r in 0..dim {
            if amps[r] == ZERO {
                continue;
            }
            for (col, b) in amps.iter().enumerate() {
                acc += amps[r].conj() * self.rho[r * dim + col] * b;
            }
        }
        Ok(acc.re)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let eig = SymmetricEigen::new(self.matrix());
        eig.eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for col in r..dim {
                worst = worst.max((self.entry(r, col) - self.entry(col, r).conj()).norm());
            }
        }
        worst
    }

    /// Checks hermiticity, unit trace and positivity within `tol`.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let herm = self.hermiticity_deviation();
        if herm > tol {
            return Err(Error::InvalidParameter(format!(
                "density matrix not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = self.trace();
        if (tr - ONE).norm() > tol {
            return Err(Error::InvalidParameter(format!("trace = {tr}, expected 1")));
        }
        let min = self.min_eigenvalue();
        if min < -tol {
            return Err(Error::InvalidParameter(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }

    fn side_positions(&self, targets: &[String]) -> Result<(Vec<usize>, Vec<usize>)> {
        let rows = resolve(&self.qubit_order, targets)?;
        let n = self.num_qubits();
        let cols = rows.iter().map(|p| p + n).collect();
        Ok((rows, cols))
    }

    /// `rho <- U rho U^dagger` on the targets.
    pub fn apply_unitary(&mut self, matrix: &CMatrix, targets: &[String]) -> Result<()> {
        check_unitary(matrix, targets.len())?;
        let (rows, cols) = self.side_positions(targets)?;
        let n2 = 2 * self.num_qubits();
        apply_local(&mut self.rho, n2, &rows, matrix);
        apply_local(&mut self.rho, n2, &cols, &matrix.map(|z| z.conj()));
        Ok(())
    }

    /// `rho <- sum_k K rho K^dagger` on the targets, in one pass over the
    /// vectorized density matrix using the channel superoperator.
    pub fn apply_channel(&mut self, channel: &KrausChannel, targets: &[String]) -> Result<()> {
        if channel.arity() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: channel.arity(),
                actual: targets.len(),
            });
        }
        let deviation = channel.completeness_deviation();
        if deviation > crate::simcore::kraus::COMPLETENESS_TOL {
            return Err(Error::IncompleteChannel { deviation });
        }
        let (mut positions, cols) = self.side_positions(targets)?;
        positions.extend(cols);
        let n2 = 2 * self.num_qubits();
        apply_local(&mut self.rho, n2, &positions, &channel.superoperator());
        Ok(())
    }

    /// Applies a precomputed superoperator to the qubits at `rows`.
    pub(crate) fn apply_superoperator(&mut self, superop: &CMatrix, rows: &[usize]) {
        let n = self.num_qubits();
        let mut positions = rows.to_vec();
        positions.extend(rows.iter().map(|p| p + n));
        apply_local(&mut self.rho, 2 * n, &positions, superop);
    }

    /// Applies a unitary already checked by the caller.
    pub(crate) fn apply_unitary_at(&mut self, matrix: &CMatrix, conj: &CMatrix, rows: &[usize]) {
        let n = self.num_qubits();
        let cols: Vec<usize> = rows.iter().map(|p| p + n).collect();
        apply_local(&mut self.rho, 2 * n, rows, matrix);
        apply_local(&mut self.rho, 2 * n, &cols, conj);
    }

    /// Reduced state over `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[String]) -> Result<MixedState> {
        if keep.is_empty() {
            return Err(Error::EmptySelection);
        }
        let kept = resolve(&self.qubit_order, keep)?;
        let n = self.num_qubits();
        let traced: Vec<usize> = (0..n).filter(|p| !kept.contains(p)).collect();
        let keep_offsets = local_offsets(n, &kept);
        let trace_offsets = local_offsets(n, &traced);
        let dk = keep_offsets.len();
        let dim = self.dim();
        let mut out = vec![ZERO; dk * dk];
        for (r, ro) in keep_offsets.iter().enumerate() {
            for (col, co) in keep_offsets.iter().enumerate() {
                out[r * dk + col] = trace_offsets
                    .iter()
                    .map(|t| self.rho[(ro | t) * dim + (co | t)])
                    .sum();
            }
        }
        Ok(MixedState {
            rho: out,
            qubit_order: keep.to_vec(),
        })
    }

    /// `rho (x) |0><0|` with the new qubit as the least significant position.
    pub(crate) fn push_zero_qubit(&mut self, label: String) {
        let dim = self.dim();
        let nd = dim * 2;
        let mut grown = vec![ZERO; nd * nd];
        for r in 0..dim {
            for col in 0..dim {
                grown[(r << 1) * nd + (col << 1)] = self.rho[r * dim + col];
            }
        }
        self.rho = grown;
        self.qubit_order.push(label);
    }

    pub(crate) fn remove_qubit(&mut self, label: &str) -> Result<()> {
        let keep: Vec<String> = self
            .qubit_order
            .iter()
            .filter(|q| q.as_str() != label)
            .cloned()
            .collect();
        if keep.len() == self.qubit_order.len() {
            return Err(Error::UnknownQubit(label.to_string()));
        }
        *self = self.partial_trace(&keep)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity, kron, pauli_x};

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn hadamard() -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
    }

    fn cnot() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = ONE;
        m[(1, 1)] = ONE;
        m[(2, 3)] = ONE;
        m[(3, 2)] = ONE;
        m
    }

    #[test]
    fn hadamard_on_zero() {
        let mut psi = PureState::zero(labels(&["a"])).unwrap();
        psi.apply_unitary(&hadamard(), &labels(&["a"])).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((psi.amplitudes()[0] - c(s, 0.0)).norm() < 1e-15);
        assert!((psi.amplitudes()[1] - c(s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cnot_first_qubit_controls() {
        // |10> -> |11>
        let mut amps = vec![ZERO; 4];
        amps[0b10] = ONE;
        let mut psi = PureState::from_amplitudes(labels(&["a", "b"]), amps).unwrap();
        psi.apply_unitary(&cnot(), &labels(&["a", "b"])).unwrap();
        assert_eq!(psi.amplitudes()[0b11], ONE);
        // reversed targets: b controls a, |11> -> |01>
        psi.apply_unitary(&cnot(), &labels(&["b", "a"])).unwrap();
        assert_eq!(psi.amplitudes()[0b01], ONE);
    }

    #[test]
    fn phase_pi_negates_one() {
        let mut psi = PureState::from_amplitudes(labels(&["a"]), vec![ZERO, ONE]).unwrap();
        let u = CMatrix::from_row_slice(
            2,
            2,
            &[
                ONE,
                ZERO,
                ZERO,
                Complex64::from_polar(1.0, std::f64::consts::PI),
            ],
        );
        psi.apply_unitary(&u, &labels(&["a"])).unwrap();
        assert!((psi.amplitudes()[1] + ONE).norm() < 1e-15);
    }

    #[test]
    fn unitary_errors() {
        let mut psi = PureState::zero(labels(&["a", "b"])).unwrap();
        let bad = CMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(matches!(
            psi.apply_unitary(&bad, &labels(&["a"])),
            Err(Error::NotUnitary { .. })
        ));
        assert!(matches!(
            psi.apply_unitary(&pauli_x(), &labels(&["z"])),
            Err(Error::UnknownQubit(_))
        ));
        assert!(matches!(
            psi.apply_unitary(&cnot(), &labels(&["a", "a"])),
            Err(Error::DuplicateQubit(_))
        ));
        assert!(PureState::zero(labels(&["a", "a"])).is_err());
    }

    #[test]
    fn mixed_unitary_matches_pure_evolution() {
        let reg = labels(&["a", "b", "c"]);
        let mut psi = PureState::zero(reg.clone()).unwrap();
        let mut rho = MixedState::zero(reg.clone()).unwrap();
        for (m, t) in [
            (hadamard(), labels(&["b"])),
            (cnot(), labels(&["b", "c"])),
            (cnot(), labels(&["c", "a"])),
            (hadamard(), labels(&["c"])),
        ] {
            psi.apply_unitary(&m, &t).unwrap();
            rho.apply_unitary(&m, &t).unwrap();
        }
        let expect = psi.to_mixed();
        assert!(crate::linalg::max_abs_diff(&rho.matrix(), &expect.matrix()) < 1e-12);
        assert!((rho.fidelity_with(&psi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_channel_leaves_state() {
        let mut rho = MixedState::zero(labels(&["a", "b"])).unwrap();
        rho.apply_unitary(&hadamard(), &labels(&["a"])).unwrap();
        let before = rho.clone();
        rho.apply_channel(&KrausChannel::identity(1), &labels(&["b"]))
            .unwrap();
        assert!(crate::linalg::max_abs_diff(&rho.matrix(), &before.matrix()) < 1e-15);
    }

    #[test]
    fn full_amplitude_damping_relaxes() {
        let k0 = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]);
        let k1 = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        let ch = KrausChannel::new(vec![k0, k1], 1).unwrap();
        let mut rho = PureState::from_amplitudes(labels(&["a"]), vec![ZERO, ONE])
            .unwrap()
            .to_mixed();
        rho.apply_channel(&ch, &labels(&["a"])).unwrap();
        assert!((rho.entry(0, 0) - ONE).norm() < 1e-15);
        assert!(rho.entry(1, 1).norm() < 1e-15);
    }

    #[test]
    fn channel_arity_must_match() {
        let mut rho = MixedState::zero(labels(&["a", "b"])).unwrap();
        assert!(matches!(
            rho.apply_channel(&KrausChannel::identity(1), &labels(&["a", "b"])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_traces() {
        // Psi+ -> I/2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi_plus =
            PureState::from_amplitudes(labels(&["a", "b"]), vec![ZERO, c(s, 0.0), c(s, 0.0), ZERO])
                .unwrap();
        let red = psi_plus.to_mixed().partial_trace(&labels(&["a"])).unwrap();
        assert!(crate::linalg::max_abs_diff(&red.matrix(), &(identity(2) * c(0.5, 0.0))) < 1e-15);

        // |0><0| (x) |1><1|, trace b -> |0><0|
        let mut amps = vec![ZERO; 4];
        amps[0b01] = ONE;
        let prod = PureState::from_amplitudes(labels(&["a", "b"]), amps)
            .unwrap()
            .to_mixed();
        let red = prod.partial_trace(&labels(&["a"])).unwrap();
        assert!((red.entry(0, 0) - ONE).norm() < 1e-15);
        let red = prod.partial_trace(&labels(&["b"])).unwrap();
        assert!((red.entry(1, 1) - ONE).norm() < 1e-15);

        // GHZ, keep one qubit -> diag(1/2, 1/2)
        let mut amps = vec![ZERO; 8];
        amps[0] = c(s, 0.0);
        amps[7] = c(s, 0.0);
        let ghz = PureState::from_amplitudes(labels(&["a", "b", "c"]), amps)
            .unwrap()
            .to_mixed();
        let red = ghz.partial_trace(&labels(&["b"])).unwrap();
        assert!((red.entry(0, 0).re - 0.5).abs() < 1e-15);
        assert!((red.entry(1, 1).re - 0.5).abs() < 1e-15);
        assert!(red.entry(0, 1).norm() < 1e-15);

        assert!(matches!(ghz.partial_trace(&[]), Err(Error::EmptySelection)));
    }

    #[test]
    fn partial_trace_reorders() {
        let a = PureState::from_amplitudes(labels(&["x"]), vec![ONE, ZERO]).unwrap();
        let b = PureState::from_amplitudes(labels(&["y"]), vec![ZERO, ONE]).unwrap();
        let joint = kron(&a.to_mixed().matrix(), &b.to_mixed().matrix());
        let rho = MixedState::from_matrix(labels(&["x", "y"]), &joint).unwrap();
        let swapped = rho.partial_trace(&labels(&["y", "x"])).unwrap();
        // |1>_y |0>_x
        assert!((swapped.entry(0b10, 0b10) - ONE).norm() < 1e-15);
    }

    #[test]
    fn grow_and_shrink_register() {
        let mut psi = PureState::zero(labels(&["a"])).unwrap();
        psi.apply_unitary(&hadamard(), &labels(&["a"])).unwrap();
        let mut rho = psi.to_mixed();
        rho.push_zero_qubit("b".into());
        assert_eq!(rho.qubit_order(), &labels(&["a", "b"])[..]);
        assert!((rho.entry(0b10, 0b00).re - 0.5).abs() < 1e-15);
        rho.remove_qubit("b").unwrap();
        assert!(crate::linalg::max_abs_diff(&rho.matrix(), &psi.to_mixed().matrix()) < 1e-15);

        psi.push_zero_qubit("b".into());
        assert!((psi.prob_one(0) - 0.5).abs() < 1e-15);
        psi.collapse_and_remove(0, true);
        assert_eq!(psi.qubit_order(), &labels(&["b"])[..]);
        assert!((psi.amplitudes()[0] - ONE).norm() < 1e-15);
    }

    #[test]
    fn bitstrings_are_msb_first() {
        assert_eq!(bitstring(0b011, 3), "011");
        assert_eq!(bitstring(1, 2), "01");
    }
}
