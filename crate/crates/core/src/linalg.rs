//! Small dense complex linear algebra used by the simulator.
//!
//! States are flat vectors whose index bits are ordered most-significant
//! first: position 0 of an `n`-bit register is bit `n - 1` of the index.
//! Local operators use the same convention, so the first target of a
//! two-qubit matrix is the high bit of its 4-dimensional index.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// The four single-qubit Paulis in the order I, X, Y, Z.
pub fn paulis() -> [CMatrix; 4] {
    [identity(2), pauli_x(), pauli_y(), pauli_z()]
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entrywise deviation of `U†U` from the identity.
pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let prod = m.adjoint() * m;
    max_abs_diff(&prod, &identity(m.nrows()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Index offsets of every local basis state for the given bit positions of
/// an `n_bits` register. `offsets[l]` has the bits of `l` scattered onto the
/// target positions, first target as the most significant local bit.
pub(crate) fn local_offsets(n_bits: usize, positions: &[usize]) -> Vec<usize> {
    let k = positions.len();
    (0..1usize << k)
        .map(|local| {
            positions.iter().enumerate().fold(0usize, |acc, (j, &pos)| {
                if local >> (k - 1 - j) & 1 == 1 {
                    acc | 1 << (n_bits - 1 - pos)
                } else {
                    acc
                }
            })
        })
        .collect()
}

/// Applies a `2^k x 2^k` matrix to the given bit positions of `amps` in place.
pub(crate) fn apply_local(amps: &mut [Complex64], n_bits: usize, positions: &[usize], m: &CMatrix) {
    debug_assert_eq!(amps.len(), 1 << n_bits);
    let dim = 1usize << positions.len();
    debug_assert_eq!(m.nrows(), dim);
    let offsets = local_offsets(n_bits, positions);
    let mask = offsets[dim - 1];
    // row-major copy for a tight inner loop
    let mat: Vec<Complex64> = (0..dim)
        .flat_map(|r| (0..dim).map(move |c| (r, c)))
        .map(|(r, c)| m[(r, c)])
        .collect();
    let mut buf = vec![ZERO; dim];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (slot, off) in buf.iter_mut().zip(&offsets) {
            *slot = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let row = &mat[r * dim..(r + 1) * dim];
            amps[base | off] = row.iter().zip(&buf).map(|(a, b)| a * b).sum();
        }
    }
}
